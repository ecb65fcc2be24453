/* Copyright 2026 The fblimits Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fblimits/sources.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <set>

#include "fblimits/error.hpp"

namespace fbl {

namespace {

constexpr double kSumTol = 1e-12;

double kahan_sum(const std::vector<double>& v) {
  double sum = 0.0, c = 0.0;
  for (double x : v) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

std::vector<double> row_entropies(const MarkovSource& src) {
  std::vector<double> h(src.num_states(), 0.0);
  for (std::size_t s = 0; s < src.num_states(); ++s) {
    for (std::size_t a = 0; a < src.alphabet_size(); ++a) {
      double p = src.cond(s, a);
      if (p > 0) h[s] -= p * std::log2(p);
    }
  }
  return h;
}

std::vector<std::vector<std::size_t>> successor_graph(const MarkovSource& src) {
  std::vector<std::vector<std::size_t>> g(src.num_states());
  for (std::size_t s = 0; s < src.num_states(); ++s) {
    for (std::size_t a = 0; a < src.alphabet_size(); ++a) {
      if (src.cond(s, a) > 0) g[s].push_back(src.next_state(s, a));
    }
  }
  return g;
}

std::vector<long> bfs_levels(const std::vector<std::vector<std::size_t>>& g) {
  std::vector<long> level(g.size(), -1);
  std::queue<std::size_t> q;
  level[0] = 0;
  q.push(0);
  while (!q.empty()) {
    std::size_t u = q.front();
    q.pop();
    for (std::size_t v : g[u]) {
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        q.push(v);
      }
    }
  }
  return level;
}

std::size_t int_pow(std::size_t base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

FiniteDistribution::FiniteDistribution(std::vector<double> probs) {
  std::vector<std::int64_t> symbols(probs.size());
  std::iota(symbols.begin(), symbols.end(), 0);
  *this = FiniteDistribution(std::move(symbols), std::move(probs));
}

FiniteDistribution::FiniteDistribution(std::vector<std::int64_t> symbols,
                                       std::vector<double> probs) {
  if (symbols.size() != probs.size()) {
    throw ValidationError("symbols and probs differ in length");
  }
  std::set<std::int64_t> seen;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double p = probs[i];
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError("probabilities must be finite and nonnegative");
    }
    if (!seen.insert(symbols[i]).second) {
      throw ValidationError("duplicate symbol id");
    }
  }
  double total = kahan_sum(probs);
  if (std::abs(total - 1.0) > kSumTol) {
    throw ValidationError("probabilities sum to " + std::to_string(total) +
                          ", not 1");
  }
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) {
      symbols_.push_back(symbols[i]);
      probs_.push_back(probs[i]);
      info_.push_back(-std::log2(probs[i]));
    }
  }
  if (probs_.empty()) throw ValidationError("no positive probability mass");
}

FiniteDistribution FiniteDistribution::uniform(std::size_t m) {
  if (m == 0) throw ValidationError("uniform distribution needs m >= 1");
  return FiniteDistribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

FiniteDistribution FiniteDistribution::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bernoulli p outside [0,1]");
  return FiniteDistribution({0, 1}, {1.0 - p, p});
}

std::optional<std::size_t> FiniteDistribution::index_of(std::int64_t symbol) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == symbol) return i;
  }
  return std::nullopt;
}

bool FiniteDistribution::equiprobable() const {
  return std::all_of(probs_.begin(), probs_.end(),
                     [&](double p) { return p == probs_.front(); });
}

FiniteDistribution CountableDistribution::truncate() const {
  if (!(tail_bound > 0.0 && tail_bound < 1.0)) {
    throw ValidationError("tail_bound must lie in (0,1)");
  }
  std::vector<double> probs;
  double sum = 0.0, c = 0.0;
  for (std::uint64_t k = 0; sum < 1.0 - tail_bound; ++k) {
    if (k >= max_support) {
      throw BudgetError("countable distribution '" + name +
                        "' needs more than max_support symbols");
    }
    double p = pmf(k);
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError("pmf returned an invalid probability");
    }
    probs.push_back(p);
    double y = p - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  for (double& p : probs) p /= sum;
  double total = kahan_sum(probs);
  // Renormalization can leave a residue of a few ulps; fold it into the
  // largest mass so the result passes the sum check.
  auto it = std::max_element(probs.begin(), probs.end());
  *it += 1.0 - total;
  return FiniteDistribution(std::move(probs));
}

double CountableDistribution::truncation_tail() const {
  double sum = 0.0;
  for (std::uint64_t k = 0; sum < 1.0 - tail_bound && k < max_support; ++k) {
    sum += pmf(k);
  }
  return std::max(0.0, 1.0 - sum);
}

CountableDistribution geometric(double q, double tail_bound) {
  if (!(q > 0.0 && q <= 1.0)) throw ValidationError("geometric q outside (0,1]");
  CountableDistribution d;
  d.name = "geometric";
  d.tail_bound = tail_bound;
  d.pmf = [q](std::uint64_t k) {
    return q * std::pow(1.0 - q, static_cast<double>(k));
  };
  return d;
}

CountableDistribution poisson(double lambda, double tail_bound) {
  if (!(lambda > 0.0)) throw ValidationError("poisson lambda must be positive");
  CountableDistribution d;
  d.name = "poisson";
  d.tail_bound = tail_bound;
  d.pmf = [lambda](std::uint64_t k) {
    double kk = static_cast<double>(k);
    return std::exp(kk * std::log(lambda) - lambda - std::lgamma(kk + 1.0));
  };
  return d;
}

double entropy(const FiniteDistribution& d) {
  double h = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) h += d.prob(i) * d.info(i);
  return h;
}

double varentropy(const FiniteDistribution& d) {
  if (d.equiprobable()) return 0.0;
  double h = entropy(d);
  double v = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double z = d.info(i) - h;
    v += d.prob(i) * z * z;
  }
  return v;
}

double third_abs_moment(const FiniteDistribution& d) {
  if (d.equiprobable()) return 0.0;
  double h = entropy(d);
  double m = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    double z = std::abs(d.info(i) - h);
    m += d.prob(i) * z * z * z;
  }
  return m;
}

MomentSummary moments(const FiniteDistribution& d) {
  return {entropy(d), varentropy(d), third_abs_moment(d)};
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

MarkovSource::MarkovSource(std::size_t alphabet_size, int order,
                           std::vector<std::vector<double>> kernel,
                           std::vector<double> initial)
    : alphabet_(alphabet_size), order_(order) {
  if (order < 1) throw ValidationError("markov order must be >= 1");
  if (alphabet_size < 1) throw ValidationError("alphabet must be nonempty");
  double log_states = order * std::log2(static_cast<double>(alphabet_size));
  if (log_states > 24) throw BudgetError("too many markov states");
  states_ = int_pow(alphabet_size, order);
  if (kernel.size() != states_) {
    throw ValidationError("kernel must have |A|^k rows");
  }
  cond_.assign(states_ * alphabet_, 0.0);
  for (std::size_t s = 0; s < states_; ++s) {
    const auto& row = kernel[s];
    double total = kahan_sum(row);
    if (std::abs(total - 1.0) > kSumTol) {
      throw ValidationError("kernel row " + std::to_string(s) +
                            " does not sum to 1");
    }
    for (double p : row) {
      if (!std::isfinite(p) || p < 0.0) {
        throw ValidationError("kernel entries must be nonnegative");
      }
    }
    if (row.size() == alphabet_) {
      for (std::size_t a = 0; a < alphabet_; ++a) cond_[s * alphabet_ + a] = row[a];
    } else if (row.size() == states_) {
      for (std::size_t t = 0; t < states_; ++t) {
        if (row[t] == 0.0) continue;
        std::size_t a = t % alphabet_;
        if (next_state(s, a) != t) {
          throw ValidationError("expanded kernel has mass on a non-shift transition");
        }
        cond_[s * alphabet_ + a] = row[t];
      }
    } else {
      throw ValidationError("kernel rows must have |A| or |A|^k entries");
    }
  }
  if (initial.empty()) {
    initial_ = invariant_law(*this);
  } else {
    if (initial.size() != states_) {
      throw ValidationError("initial law must have |A|^k entries");
    }
    for (double p : initial) {
      if (!std::isfinite(p) || p < 0.0) {
        throw ValidationError("initial law entries must be nonnegative");
      }
    }
    if (std::abs(kahan_sum(initial) - 1.0) > kSumTol) {
      throw ValidationError("initial law does not sum to 1");
    }
    initial_ = std::move(initial);
  }
}

MarkovSource MarkovSource::iid(const FiniteDistribution& d) {
  std::vector<double> row(d.probs());
  std::vector<std::vector<double>> kernel(row.size(), row);
  return MarkovSource(row.size(), 1, std::move(kernel), row);
}

bool is_irreducible(const MarkovSource& src) {
  auto g = successor_graph(src);
  auto fwd = bfs_levels(g);
  if (std::any_of(fwd.begin(), fwd.end(), [](long l) { return l < 0; })) {
    return false;
  }
  std::vector<std::vector<std::size_t>> rev(g.size());
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t v : g[u]) rev[v].push_back(u);
  }
  auto back = bfs_levels(rev);
  return std::none_of(back.begin(), back.end(), [](long l) { return l < 0; });
}

int period(const MarkovSource& src) {
  if (!is_irreducible(src)) throw StructuralError("period of a reducible chain");
  auto g = successor_graph(src);
  auto level = bfs_levels(g);
  long d = 0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (std::size_t v : g[u]) {
      d = std::gcd(d, std::abs(level[u] + 1 - level[v]));
    }
  }
  return static_cast<int>(d);
}

std::vector<double> invariant_law(const MarkovSource& src) {
  if (!is_irreducible(src)) throw StructuralError("chain is not irreducible");
  const std::size_t m = src.num_states();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t x = 0; x < src.alphabet_size(); ++x) {
      a(src.next_state(s, x), s) += src.cond(s, x);
    }
  }
  a -= Eigen::MatrixXd::Identity(m, m);
  a.row(m - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  b(m - 1) = 1.0;
  Eigen::VectorXd pi = a.fullPivLu().solve(b);

  std::vector<double> p(pi.data(), pi.data() + m);
  auto step = [&](const std::vector<double>& in) {
    std::vector<double> out(m, 0.0);
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t x = 0; x < src.alphabet_size(); ++x) {
        out[src.next_state(s, x)] += in[s] * src.cond(s, x);
      }
    }
    return out;
  };
  auto residual = [&](const std::vector<double>& v) {
    auto w = step(v);
    double r = 0.0;
    for (std::size_t s = 0; s < m; ++s) r += std::abs(w[s] - v[s]);
    return r;
  };
  auto normalize = [&](std::vector<double>& v) {
    for (double& x : v) x = std::max(x, 0.0);
    double t = kahan_sum(v);
    for (double& x : v) x /= t;
  };
  normalize(p);
  // Lazy power steps (I + P)/2 keep the law invariant for periodic chains
  // too, and only shrink the residual.
  double r = residual(p);
  for (int it = 0; it < 2000 && r > 1e-15; ++it) {
    auto w = step(p);
    for (std::size_t s = 0; s < m; ++s) w[s] = 0.5 * (w[s] + p[s]);
    normalize(w);
    double rw = residual(w);
    if (rw >= r) break;
    p.swap(w);
    r = rw;
  }
  if (r > 1e-12) {
    throw ConvergenceError("invariant law residual " + std::to_string(r), r, 0);
  }
  return p;
}

FiniteDistribution stationary_distribution(const MarkovSource& src) {
  if (!is_irreducible(src)) throw StructuralError("chain is not irreducible");
  if (period(src) != 1) throw StructuralError("chain is periodic");
  auto pi = invariant_law(src);
  std::vector<std::int64_t> states(pi.size());
  std::iota(states.begin(), states.end(), 0);
  return FiniteDistribution(std::move(states), std::move(pi));
}

double markov_entropy_rate(const MarkovSource& src) {
  auto h = row_entropies(src);
  if (!is_irreducible(src)) {
    if (std::all_of(h.begin(), h.end(), [&](double x) { return x == h.front(); })) {
      return h.front();
    }
    throw StructuralError("entropy rate of a reducible chain with unequal rows");
  }
  auto pi = invariant_law(src);
  double rate = 0.0;
  for (std::size_t s = 0; s < pi.size(); ++s) rate += pi[s] * h[s];
  return rate;
}

VarentropyRate markov_varentropy_rate(const MarkovSource& src, double tol,
                                      long max_lags) {
  if (!(tol > 0.0)) throw ValidationError("tol must be positive");
  const std::size_t m = src.num_states();
  const std::size_t k = src.alphabet_size();

  // Rows that are each equiprobable on their support with a common support
  // size make f constant on the block chain, so every covariance vanishes.
  {
    bool constant_f = true;
    double f0 = -1.0;
    for (std::size_t s = 0; s < m && constant_f; ++s) {
      for (std::size_t a = 0; a < k; ++a) {
        double p = src.cond(s, a);
        if (p <= 0) continue;
        double f = -std::log2(p);
        if (f0 < 0) f0 = f;
        if (f != f0) {
          constant_f = false;
          break;
        }
      }
    }
    if (constant_f) return {0.0, 0.0, 0};
  }

  auto pi = invariant_law(src);
  double h = 0.0;
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t a = 0; a < k; ++a) {
      double p = src.cond(s, a);
      if (p > 0) h -= pi[s] * p * std::log2(p);
    }
  }
  // g0 on block states y = (s, a); weight w(y) = pi(s) P(a|s).
  std::vector<double> g0(m * k, 0.0), w(m * k, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    for (std::size_t a = 0; a < k; ++a) {
      double p = src.cond(s, a);
      if (p <= 0) continue;
      g0[s * k + a] = -std::log2(p) - h;
      w[s * k + a] = pi[s] * p;
    }
  }
  auto cov = [&](const std::vector<double>& g) {
    double c = 0.0, comp = 0.0;
    for (std::size_t y = 0; y < g.size(); ++y) {
      double t = w[y] * g0[y] * g[y];
      double u = t - comp;
      double v = c + u;
      comp = (v - c) - u;
      c = v;
    }
    return c;
  };

  double c0 = cov(g0);
  double sum = c0;
  std::vector<double> g = g0, next(m * k), hstate(m);
  int small_run = 0;
  double prev = c0;
  double last_ratio = 0.0;
  long d = 0;
  for (d = 1; d <= max_lags; ++d) {
    // E[g_{d-1}(Y_2) | Y_1 = (s, a)] depends on the successor state only.
    for (std::size_t t = 0; t < m; ++t) {
      double acc = 0.0;
      for (std::size_t b = 0; b < k; ++b) acc += src.cond(t, b) * g[t * k + b];
      hstate[t] = acc;
    }
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t a = 0; a < k; ++a) {
        next[s * k + a] = hstate[src.next_state(s, a)];
      }
    }
    g.swap(next);
    double c = cov(g);
    sum += 2.0 * c;
    if (prev != 0.0 && c != 0.0) last_ratio = std::abs(c / prev);
    prev = c;
    if (std::abs(c) < tol) {
      if (++small_run >= 5) break;
    } else {
      small_run = 0;
    }
  }
  if (d > max_lags) {
    throw ConvergenceError("varentropy-rate covariance series did not settle",
                           sum, max_lags);
  }
  double rho = std::min(last_ratio, 0.999);
  double tail = 2.0 * std::abs(prev) * rho / (1.0 - rho);
  return {std::max(sum, 0.0), tail + 5.0 * 2.0 * tol, d};
}

double markov_block_entropy(const MarkovSource& src, int n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  const std::size_t m = src.num_states();
  const std::size_t k = src.alphabet_size();
  const auto& init = src.initial();
  if (n <= src.order()) {
    std::size_t blocks = int_pow(k, src.order() - n);
    std::vector<double> marg(m / blocks, 0.0);
    for (std::size_t s = 0; s < m; ++s) marg[s / blocks] += init[s];
    double h = 0.0;
    for (double p : marg) {
      if (p > 0) h -= p * std::log2(p);
    }
    return h;
  }
  double h = 0.0;
  for (double p : init) {
    if (p > 0) h -= p * std::log2(p);
  }
  auto rows = row_entropies(src);
  std::vector<double> mu = init, next(m);
  for (int t = src.order(); t < n; ++t) {
    for (std::size_t s = 0; s < m; ++s) h += mu[s] * rows[s];
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < m; ++s) {
      for (std::size_t a = 0; a < k; ++a) {
        next[src.next_state(s, a)] += mu[s] * src.cond(s, a);
      }
    }
    mu.swap(next);
  }
  return h;
}

double markov_information_growth(const MarkovSource& src) {
  double worst = 0.0;
  for (std::size_t s = 0; s < src.num_states(); ++s) {
    for (std::size_t a = 0; a < src.alphabet_size(); ++a) {
      double p = src.cond(s, a);
      if (p > 0) worst = std::max(worst, -std::log2(p));
    }
  }
  return worst;
}

}  // namespace fbl

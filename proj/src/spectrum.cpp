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

#include "fblimits/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <future>
#include <random>
#include <thread>

#include "fblimits/error.hpp"

namespace fbl {

namespace {

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

constexpr double kQuantileSlack = 1e-12;
constexpr std::uint64_t kChunk = 1 << 14;

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double int_pow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

// count * p when p is a normal double, else from the log domain.
double class_prob(const BigCount& count, double p, double info) {
  if (p >= std::numeric_limits<double>::min()) return count.get_d() * p;
  return std::exp2(log2_big(count) - info);
}

std::size_t draw(const std::vector<double>& cum, double u) {
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cum.begin());
  return std::min(i, cum.size() - 1);
}

}  // namespace

double merge_tolerance(double info) {
  return std::max(1e-12, 1e-12 * std::abs(info));
}

InformationSpectrum InformationSpectrum::exact(std::vector<SpectrumMass> masses,
                                               int n, bool keep_probs) {
  if (masses.empty()) throw ValidationError("spectrum needs at least one mass");
  std::sort(masses.begin(), masses.end(),
            [](const SpectrumMass& a, const SpectrumMass& b) {
              return a.info < b.info;
            });
  InformationSpectrum s;
  s.n_ = n;
  s.exact_ = true;
  for (auto& m : masses) {
    if (sgn(m.count) <= 0) throw ValidationError("mass count must be positive");
    if (!keep_probs) m.prob = std::exp2(log2_big(m.count) - m.info);
    if (!s.masses_.empty() &&
        m.info - s.masses_.back().info <= merge_tolerance(s.masses_.back().info)) {
      s.masses_.back().count += m.count;
      s.masses_.back().prob += m.prob;
    } else {
      s.masses_.push_back(std::move(m));
    }
  }
  s.finalize();
  return s;
}

InformationSpectrum InformationSpectrum::empirical(std::vector<double> values,
                                                   int n) {
  if (values.empty()) throw ValidationError("no samples");
  std::sort(values.begin(), values.end());
  InformationSpectrum s;
  s.n_ = n;
  s.exact_ = false;
  s.samples_ = values.size();
  std::vector<std::uint64_t> hits;
  for (double v : values) {
    if (!s.masses_.empty() &&
        v - s.masses_.back().info <= merge_tolerance(s.masses_.back().info)) {
      ++hits.back();
    } else {
      s.masses_.push_back({v, 0.0, 1});
      hits.push_back(1);
    }
  }
  const double total = static_cast<double>(values.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    s.masses_[i].prob = static_cast<double>(hits[i]) / total;
  }
  s.finalize();
  return s;
}

void InformationSpectrum::finalize() {
  const std::size_t m = masses_.size();
  head_.assign(m + 1, 0.0);
  tail_.assign(m + 1, 0.0);
  Kahan h, t;
  for (std::size_t i = 0; i < m; ++i) {
    h.add(masses_[i].prob);
    head_[i + 1] = h.sum;
  }
  for (std::size_t i = m; i-- > 0;) {
    t.add(masses_[i].prob);
    tail_[i] = t.sum;
  }
  if (exact_) {
    cum_counts_.resize(m);
    BigCount c = 0;
    for (std::size_t i = 0; i < m; ++i) {
      c += masses_[i].count;
      cum_counts_[i] = c;
    }
  }
}

void InformationSpectrum::require_exact(const char* what) const {
  if (!exact_) {
    throw UnsupportedError(std::string(what) +
                           " needs an exact spectrum, not a sampled one");
  }
}

const BigCount& InformationSpectrum::total_count() const {
  require_exact("total_count");
  return cum_counts_.back();
}

const BigCount& InformationSpectrum::cum_count(std::size_t i) const {
  require_exact("cum_count");
  return cum_counts_[i];
}

BigCount InformationSpectrum::count_before(std::size_t i) const {
  require_exact("count_before");
  return i == 0 ? BigCount(0) : cum_counts_[i - 1];
}

std::size_t InformationSpectrum::lower_index(double a) const {
  double cut = a - merge_tolerance(a);
  auto it = std::lower_bound(
      masses_.begin(), masses_.end(), cut,
      [](const SpectrumMass& m, double x) { return m.info < x; });
  return static_cast<std::size_t>(it - masses_.begin());
}

std::size_t InformationSpectrum::upper_index(double a) const {
  double cut = a + merge_tolerance(a);
  auto it = std::upper_bound(
      masses_.begin(), masses_.end(), cut,
      [](double x, const SpectrumMass& m) { return x < m.info; });
  return static_cast<std::size_t>(it - masses_.begin());
}

double InformationSpectrum::mean() const {
  Kahan k;
  for (const auto& m : masses_) k.add(m.prob * m.info);
  return k.sum;
}

double InformationSpectrum::variance() const {
  double mu = mean();
  Kahan k;
  for (const auto& m : masses_) {
    double z = m.info - mu;
    k.add(m.prob * z * z);
  }
  return k.sum;
}

double InformationSpectrum::second_moment() const {
  Kahan k;
  for (const auto& m : masses_) k.add(m.prob * m.info * m.info);
  return k.sum;
}

double InformationSpectrum::third_abs_central_moment() const {
  double mu = mean();
  Kahan k;
  for (const auto& m : masses_) {
    double z = std::abs(m.info - mu);
    k.add(m.prob * z * z * z);
  }
  return k.sum;
}

InformationSpectrum iid_spectrum(const FiniteDistribution& dist, int n,
                                 const SpectrumBudget& budget) {
  if (n < 1) throw ValidationError("blocklength must be >= 1");
  const std::size_t m = dist.size();
  BigCount classes;
  mpz_bin_uiui(classes.get_mpz_t(), static_cast<unsigned long>(n + m - 1),
               static_cast<unsigned long>(m - 1));
  if (classes > BigCount(std::to_string(budget.max_type_classes))) {
    throw BudgetError("iid spectrum needs " + to_decimal(classes) +
                      " type classes, over the budget of " +
                      std::to_string(budget.max_type_classes) +
                      "; use the Monte-Carlo path");
  }

  std::vector<SpectrumMass> masses;
  masses.reserve(classes.get_ui());
  // Depth-first over compositions: symbol d takes j of the `left` remaining
  // positions, multiplying the count by C(left, j).
  // The per-string probability is also carried as a plain product, which
  // is exact for dyadic sources and otherwise off by a few ulps.
  struct Frame {
    std::size_t symbol;
    int left;
    double info;
    double prob;
    BigCount count;
  };
  std::vector<Frame> stack;
  stack.push_back({0, n, 0.0, 1.0, 1});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.symbol + 1 == m) {
      double info = f.info + f.left * dist.info(f.symbol);
      double p = f.prob * int_pow(dist.prob(f.symbol), f.left);
      masses.push_back({info, class_prob(f.count, p, info), f.count});
      continue;
    }
    BigCount binom = 1;
    for (int j = 0; j <= f.left; ++j) {
      if (j > 0) {
        binom *= static_cast<unsigned long>(f.left - j + 1);
        binom /= static_cast<unsigned long>(j);
      }
      stack.push_back({f.symbol + 1, f.left - j, f.info + j * dist.info(f.symbol),
                       f.prob * int_pow(dist.prob(f.symbol), j), f.count * binom});
    }
  }
  return InformationSpectrum::exact(std::move(masses), n, true);
}

InformationSpectrum binomial_spectrum(std::uint64_t trials, double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ValidationError("binomial parameter must lie in (0,1)");
  }
  if (trials > 10'000'000) throw BudgetError("binomial source too large");
  const double lp = std::log2(p), lq = std::log2(1.0 - p);
  std::vector<SpectrumMass> masses;
  masses.reserve(trials + 1);
  BigCount binom = 1;
  for (std::uint64_t k = 0; k <= trials; ++k) {
    if (k > 0) {
      binom *= static_cast<unsigned long>(trials - k + 1);
      binom /= static_cast<unsigned long>(k);
    }
    // Outcome k is a single symbol; its info is -log2 P(k).
    double info = -log2_big(binom) - static_cast<double>(k) * lp -
                  static_cast<double>(trials - k) * lq;
    masses.push_back({info, std::exp2(-info), 1});
  }
  return InformationSpectrum::exact(std::move(masses), 1);
}

InformationSpectrum markov_spectrum_exact(const MarkovSource& src, int n,
                                          const SpectrumBudget& budget) {
  if (n < 1) throw ValidationError("blocklength must be >= 1");
  const std::size_t k = src.alphabet_size();
  double strings = std::pow(static_cast<double>(k), n);
  if (strings > static_cast<double>(budget.max_enumeration)) {
    throw BudgetError("markov enumeration of " + std::to_string(k) + "^" +
                      std::to_string(n) + " strings exceeds the budget of " +
                      std::to_string(budget.max_enumeration));
  }
  std::vector<SpectrumMass> masses;
  const auto& init = src.initial();
  if (n <= src.order()) {
    std::size_t blocks = 1;
    for (int i = n; i < src.order(); ++i) blocks *= k;
    std::vector<double> marg(src.num_states() / blocks, 0.0);
    for (std::size_t s = 0; s < src.num_states(); ++s) marg[s / blocks] += init[s];
    for (double p : marg) {
      if (p > 0) masses.push_back({-std::log2(p), p, 1});
    }
    return InformationSpectrum::exact(std::move(masses), n);
  }
  struct Frame {
    std::size_t state;
    int depth;
    double info;
    double prob;
  };
  std::vector<Frame> stack;
  for (std::size_t s = 0; s < src.num_states(); ++s) {
    if (init[s] > 0) stack.push_back({s, src.order(), -std::log2(init[s]), init[s]});
  }
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.depth == n) {
      masses.push_back({f.info, class_prob(1, f.prob, f.info), 1});
      continue;
    }
    for (std::size_t a = 0; a < k; ++a) {
      double p = src.cond(f.state, a);
      if (p > 0) {
        stack.push_back({src.next_state(f.state, a), f.depth + 1,
                         f.info - std::log2(p), f.prob * p});
      }
    }
  }
  return InformationSpectrum::exact(std::move(masses), n, true);
}

std::vector<double> markov_information_samples(const MarkovSource& src, int n,
                                               std::uint64_t samples,
                                               std::uint64_t seed,
                                               unsigned threads) {
  if (n < 1) throw ValidationError("blocklength must be >= 1");
  if (samples < 1) throw ValidationError("samples must be >= 1");
  const std::size_t k = src.alphabet_size();
  const std::size_t m = src.num_states();

  std::vector<double> init_cum(m);
  double acc = 0.0;
  for (std::size_t s = 0; s < m; ++s) init_cum[s] = (acc += src.initial()[s]);
  std::vector<std::vector<double>> row_cum(m, std::vector<double>(k));
  std::vector<double> step_info(m * k, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    double c = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      double p = src.cond(s, a);
      row_cum[s][a] = (c += p);
      if (p > 0) step_info[s * k + a] = -std::log2(p);
    }
  }
  // For n below the order only the first n symbols of the start state count.
  std::size_t prefix_blocks = 1;
  for (int i = n; i < src.order(); ++i) prefix_blocks *= k;
  std::vector<double> prefix_info;
  if (n < src.order()) {
    std::vector<double> marg(m / prefix_blocks, 0.0);
    for (std::size_t s = 0; s < m; ++s) marg[s / prefix_blocks] += src.initial()[s];
    for (double p : marg) prefix_info.push_back(p > 0 ? -std::log2(p) : 0.0);
  }

  std::vector<double> out(samples);
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  auto run_chunk = [&](std::uint64_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c),
                      static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 gen(seq);
    std::uint64_t lo = c * kChunk, hi = std::min(samples, lo + kChunk);
    for (std::uint64_t i = lo; i < hi; ++i) {
      std::size_t s = draw(init_cum, uniform01(gen) * acc);
      double info;
      if (n < src.order()) {
        info = prefix_info[s / prefix_blocks];
      } else {
        info = -std::log2(src.initial()[s]);
        for (int t = src.order(); t < n; ++t) {
          std::size_t a = draw(row_cum[s], uniform01(gen) * row_cum[s].back());
          info += step_info[s * k + a];
          s = src.next_state(s, a);
        }
      }
      out[i] = info;
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::uint64_t c = w; c < chunks; c += threads) run_chunk(c);
      }));
    }
    for (auto& f : workers) f.get();
  }
  return out;
}

InformationSpectrum markov_spectrum_mc(const MarkovSource& src, int n,
                                       std::uint64_t samples, std::uint64_t seed,
                                       unsigned threads) {
  return InformationSpectrum::empirical(
      markov_information_samples(src, n, samples, seed, threads), n);
}

double ccdf(const InformationSpectrum& spec, double a) {
  std::size_t i = spec.lower_index(a);
  if (i == 0) return 1.0;
  return spec.tail_prob(i);
}

double cdf(const InformationSpectrum& spec, double a) {
  std::size_t i = spec.upper_index(a);
  if (i == spec.size()) return 1.0;
  return spec.head_prob(i);
}

BigCount count_M_log2(const InformationSpectrum& spec, double a) {
  if (!spec.is_exact()) throw UnsupportedError("count_M needs an exact spectrum");
  return spec.count_before(spec.lower_index(a));
}

BigCount count_M_plus_log2(const InformationSpectrum& spec, double a) {
  if (!spec.is_exact()) {
    throw UnsupportedError("count_M_plus needs an exact spectrum");
  }
  return spec.count_before(spec.upper_index(a));
}

BigCount count_M(const InformationSpectrum& spec, double beta) {
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  return count_M_log2(spec, std::log2(beta));
}

BigCount count_M_plus(const InformationSpectrum& spec, double beta) {
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  return count_M_plus_log2(spec, std::log2(beta));
}

double quantile(const InformationSpectrum& spec, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("quantile level outside (0,1]");
  if (p == 1.0) return spec.max_info();
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (spec.head_prob(i + 1) >= p - kQuantileSlack) return spec.mass(i).info;
  }
  return spec.max_info();
}

}  // namespace fbl

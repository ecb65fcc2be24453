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

#include "fblimits/optcode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fblimits/error.hpp"

namespace fbl {

namespace {

void require_exact(const InformationSpectrum& spec, const char* what) {
  if (!spec.is_exact()) {
    throw UnsupportedError(std::string(what) + " needs an exact spectrum");
  }
}

// Probability of `cnt` strings of mass i.
double piece_prob(const InformationSpectrum& spec, std::size_t i,
                  const BigCount& cnt) {
  const auto& m = spec.mass(i);
  if (cnt == m.count) return m.prob;
  if (sgn(cnt) == 0) return 0.0;
  return std::exp2(log2_big(cnt) - m.info);
}

// Visits the pieces of the rank axis cut at powers of 2, in rank order:
// fn(mass index, codeword length, probability of the piece).
template <typename Fn>
void for_each_length_piece(const InformationSpectrum& spec, Fn&& fn) {
  BigCount lo = 1, start, end, cnt;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const BigCount& hi = spec.cum_count(i);
    std::uint64_t j_lo = bit_length(lo) - 1, j_hi = bit_length(hi) - 1;
    if (j_lo == j_hi) {
      fn(i, j_lo, spec.mass(i).prob);
    } else {
      for (std::uint64_t j = j_lo; j <= j_hi; ++j) {
        start = j == j_lo ? lo : pow2(j);
        end = j == j_hi ? hi : pow2(j + 1) - 1;
        cnt = end - start + 1;
        fn(i, j, piece_prob(spec, i, cnt));
      }
    }
    lo = hi + 1;
  }
}

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

// epsilon_star(k) within this of eps counts as meeting eps. Decimal inputs
// make exact ties common (0.3 * 0.2 + 0.2 * 0.2 against 0.1) and rounding
// alone would otherwise pick the side.
constexpr double kTieSlack = 1e-12;

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw ValidationError("eps must lie in [0,1)");
}

}  // namespace

RankCut rank_cut(const InformationSpectrum& spec, const BigCount& threshold) {
  require_exact(spec, "rank_cut");
  RankCut cut;
  cut.threshold = threshold;
  if (threshold >= spec.total_count()) {
    cut.mass_index = spec.size();
    cut.cum_count_below = spec.total_count();
    cut.cum_prob_below = spec.head_prob(spec.size());
    cut.partial_count = 0;
    cut.excluded_prob = 0.0;
    return cut;
  }
  // First mass whose cumulative count passes the threshold.
  std::size_t lo = 0, hi = spec.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (spec.cum_count(mid) > threshold) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  cut.mass_index = lo;
  cut.cum_count_below = spec.count_before(lo);
  cut.cum_prob_below = spec.head_prob(lo);
  cut.partial_count = threshold - cut.cum_count_below;
  if (sgn(cut.partial_count) == 0) {
    // The cut sits on a mass boundary: the excluded part is an exact suffix.
    cut.partial_prob = 0.0;
    cut.excluded_prob = spec.tail_prob(lo);
  } else {
    BigCount rest = spec.cum_count(lo) - threshold;
    cut.partial_prob = piece_prob(spec, lo, cut.partial_count);
    cut.excluded_prob = piece_prob(spec, lo, rest) + spec.tail_prob(lo + 1);
  }
  return cut;
}

std::uint64_t max_codeword_length(const InformationSpectrum& spec) {
  require_exact(spec, "max_codeword_length");
  return bit_length(spec.total_count()) - 1;
}

double epsilon_star(const InformationSpectrum& spec, std::uint64_t k) {
  require_exact(spec, "epsilon_star");
  if (k == 0) return 1.0;
  if (k > bit_length(spec.total_count())) return 0.0;
  return rank_cut(spec, pow2(k) - 1).excluded_prob;
}

std::uint64_t optimal_length_threshold(const InformationSpectrum& spec, double eps) {
  require_exact(spec, "R_star");
  check_eps(eps);
  std::uint64_t lo = 0, hi = ceil_log2(spec.total_count()) + 1;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (epsilon_star(spec, mid) <= eps + kTieSlack) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

double R_star(const InformationSpectrum& spec, double eps) {
  return static_cast<double>(optimal_length_threshold(spec, eps)) / spec.n();
}

ThresholdRate R_star_via_viva(const InformationSpectrum& spec, double a) {
  require_exact(spec, "R_star_via_viva");
  if (!(a >= 0.0)) throw ValidationError("threshold a must be >= 0");
  ThresholdRate r;
  r.M = count_M_log2(spec, a);
  r.eps = ccdf(spec, a);
  r.length = static_cast<std::int64_t>(bit_length(r.M)) - 1;
  r.rate = static_cast<double>(r.length) / spec.n();
  return r;
}

CodelengthDistribution codelength_distribution(const InformationSpectrum& spec) {
  require_exact(spec, "codelength_distribution");
  CodelengthDistribution d;
  d.n = spec.n();
  const std::uint64_t lmax = max_codeword_length(spec);
  std::vector<Kahan> by_len(lmax + 1);
  Kahan gap2, gap;
  for_each_length_piece(spec, [&](std::size_t i, std::uint64_t j, double p) {
    by_len[j].add(p);
    double z = spec.mass(i).info - static_cast<double>(j);
    gap2.add(p * z * z);
    gap.add(p * z);
  });
  d.probs_by_length.resize(lmax + 1);
  Kahan m1, m2;
  for (std::uint64_t j = 0; j <= lmax; ++j) {
    double p = by_len[j].sum;
    d.probs_by_length[j] = p;
    m1.add(p * static_cast<double>(j));
    m2.add(p * static_cast<double>(j) * static_cast<double>(j));
  }
  d.mean = m1.sum;
  d.second_moment = m2.sum;
  Kahan var;
  for (std::uint64_t j = 0; j <= lmax; ++j) {
    double z = static_cast<double>(j) - d.mean;
    var.add(d.probs_by_length[j] * z * z);
  }
  d.variance = var.sum;
  d.gap2 = gap2.sum;
  d.mean_gap = gap.sum;
  return d;
}

double Rbar(const InformationSpectrum& spec) {
  return codelength_distribution(spec).mean / spec.n();
}

double Rbar_from_epsilon(const InformationSpectrum& spec) {
  require_exact(spec, "Rbar");
  const std::uint64_t lmax = max_codeword_length(spec);
  Kahan s;
  for (std::uint64_t k = 1; k <= lmax; ++k) s.add(epsilon_star(spec, k));
  return s.sum / spec.n();
}

double integral_identity_check(const InformationSpectrum& spec) {
  require_exact(spec, "integral_identity_check");
  const std::uint64_t kmax = ceil_log2(spec.total_count()) + 1;
  // R*(n, x) = k/n on [eps*(k), eps*(k-1)).
  Kahan integral;
  double prev = epsilon_star(spec, 0);
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    double cur = epsilon_star(spec, k);
    integral.add(static_cast<double>(k) / spec.n() * (prev - cur));
    prev = cur;
  }
  return std::abs(Rbar(spec) - (integral.sum - 1.0 / spec.n()));
}

mpq_class expected_length_equiprobable_exact(std::uint64_t M) {
  if (M < 1) throw ValidationError("M must be >= 1");
  BigCount m = M;
  std::uint64_t L = bit_length(m) - 1;
  // M E[l] = M L + 2 + L - 2^(L+1), an integer.
  mpq_class v(m * L + 2 + L - pow2(L + 1), m);
  v.canonicalize();
  return v;
}

double expected_length_equiprobable(std::uint64_t M) {
  return expected_length_equiprobable_exact(M).get_d();
}

double var_length_equiprobable(std::uint64_t M) {
  if (M < 1) throw ValidationError("M must be >= 1");
  BigCount m = M;
  std::uint64_t L = bit_length(m) - 1;
  BigCount s1 = m * L + 2 + L - pow2(L + 1);
  // s(L) = sum_{i=1}^L i^2 2^i = -6 + 2^(L+1)(3 - 2L + L^2)
  BigCount sL = pow2(L + 1) * (3 - 2 * BigCount(L) + BigCount(L) * L) - 6;
  BigCount s2 = sL - BigCount(L) * L * (pow2(L + 1) - m - 1);
  // Var = (M s2 - s1^2) / M^2, exact numerator.
  BigCount num = m * s2 - s1 * s1;
  mpq_class v(num, m * m);
  v.canonicalize();
  return v.get_d();
}

double prefix_epsilon(const InformationSpectrum& spec, std::uint64_t j) {
  require_exact(spec, "prefix_epsilon");
  if (j == 0) return 1.0;
  std::uint64_t k = j - 1;
  // A prefix code can give length <= k to at most 2^k - 1 strings unless
  // every string fits, which needs 2^k >= number of strings.
  if (k > bit_length(spec.total_count()) || pow2(k) >= spec.total_count()) {
    return 0.0;
  }
  return epsilon_star(spec, k);
}

double prefix_R(const InformationSpectrum& spec, double eps) {
  require_exact(spec, "prefix_R");
  check_eps(eps);
  const BigCount& T = spec.total_count();
  std::uint64_t k = optimal_length_threshold(spec, eps);
  // With T = 2^m strings and k = m + 1, a complete prefix code of length m
  // already has no excess.
  if (is_power_of_two(T) && k == bit_length(T)) {
    return static_cast<double>(k) / spec.n();
  }
  return static_cast<double>(k + 1) / spec.n();
}

std::string rank_to_bits(std::uint64_t r) {
  if (r == 0) throw ValidationError("ranks start at 1");
  int j = 63 - __builtin_clzll(r);
  std::string bits(static_cast<std::size_t>(j), '0');
  std::uint64_t v = r - (std::uint64_t{1} << j);
  for (int b = 0; b < j; ++b) {
    if ((v >> (j - 1 - b)) & 1) bits[static_cast<std::size_t>(b)] = '1';
  }
  return bits;
}

std::uint64_t bits_to_rank(const std::string& bits) {
  if (bits.size() >= 63) throw ValidationError("codeword too long");
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("codeword must be binary");
    v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return (std::uint64_t{1} << bits.size()) + v;
}

OptimalCode::OptimalCode(const FiniteDistribution& dist, int n,
                         std::uint64_t max_enumeration)
    : dist_(dist), n_(n) {
  if (n < 1) throw ValidationError("blocklength must be >= 1");
  const std::size_t k = dist.size();
  double total = std::pow(static_cast<double>(k), n);
  if (total > static_cast<double>(max_enumeration)) {
    throw BudgetError("code table of " + std::to_string(k) + "^" +
                      std::to_string(n) + " strings exceeds the budget");
  }
  const std::uint64_t strings = static_cast<std::uint64_t>(std::llround(total));
  // Info of each string from its composition, so permutations agree
  // bit for bit.
  std::vector<double> info(strings);
  std::vector<int> comp(k);
  for (std::uint64_t idx = 0; idx < strings; ++idx) {
    std::fill(comp.begin(), comp.end(), 0);
    std::uint64_t v = idx;
    for (int t = 0; t < n; ++t) {
      ++comp[v % k];
      v /= k;
    }
    double s = 0.0;
    for (std::size_t a = 0; a < k; ++a) s += comp[a] * dist.info(a);
    info[idx] = s;
  }
  // Collapse numerically equal probabilities into classes.
  std::vector<double> distinct(info);
  std::sort(distinct.begin(), distinct.end());
  std::vector<double> reps;
  for (double x : distinct) {
    if (reps.empty() || x - reps.back() > merge_tolerance(reps.back())) {
      reps.push_back(x);
    }
  }
  auto class_of = [&](double x) {
    auto it = std::upper_bound(reps.begin(), reps.end(), x + merge_tolerance(x));
    return static_cast<std::size_t>(it - reps.begin()) - 1;
  };
  std::vector<std::size_t> cls(strings);
  for (std::uint64_t idx = 0; idx < strings; ++idx) cls[idx] = class_of(info[idx]);
  // String index is the base-|A| numeral with the first symbol most
  // significant, so index order is lexicographic order.
  order_.resize(strings);
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::uint64_t a, std::uint64_t b) { return cls[a] < cls[b]; });
  rank_.resize(strings);
  for (std::uint64_t r = 0; r < strings; ++r) rank_[order_[r]] = r;
}

std::uint64_t OptimalCode::index_of(const std::vector<std::int64_t>& x) const {
  if (x.size() != static_cast<std::size_t>(n_)) {
    throw ValidationError("string length differs from blocklength");
  }
  std::uint64_t idx = 0;
  for (std::int64_t sym : x) {
    auto a = dist_.index_of(sym);
    if (!a) throw ValidationError("string has zero probability");
    idx = idx * dist_.size() + *a;
  }
  return idx;
}

std::uint64_t OptimalCode::rank(const std::vector<std::int64_t>& x) const {
  return rank_[index_of(x)] + 1;
}

std::string OptimalCode::encode(const std::vector<std::int64_t>& x) const {
  return rank_to_bits(rank(x));
}

std::vector<std::int64_t> OptimalCode::decode(const std::string& bits) const {
  std::uint64_t r = bits_to_rank(bits);
  if (r > order_.size()) throw ValidationError("codeword not in the code");
  std::uint64_t idx = order_[r - 1];
  std::vector<std::int64_t> x(static_cast<std::size_t>(n_));
  for (int t = n_ - 1; t >= 0; --t) {
    x[static_cast<std::size_t>(t)] = dist_.symbols()[idx % dist_.size()];
    idx /= dist_.size();
  }
  return x;
}

}  // namespace fbl

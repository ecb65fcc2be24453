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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fbl {

// Probability mass function on a finite alphabet. Zero-probability symbols
// are dropped at construction, so info() is always finite.
class FiniteDistribution {
 public:
  explicit FiniteDistribution(std::vector<double> probs);
  FiniteDistribution(std::vector<std::int64_t> symbols,
                     std::vector<double> probs);

  static FiniteDistribution uniform(std::size_t m);
  // Symbols {0, 1} with P(1) = p.
  static FiniteDistribution bernoulli(double p);

  std::size_t size() const { return probs_.size(); }
  const std::vector<std::int64_t>& symbols() const { return symbols_; }
  const std::vector<double>& probs() const { return probs_; }
  double prob(std::size_t i) const { return probs_[i]; }
  // log2(1 / p_i)
  double info(std::size_t i) const { return info_[i]; }
  std::optional<std::size_t> index_of(std::int64_t symbol) const;
  bool equiprobable() const;

 private:
  std::vector<std::int64_t> symbols_;
  std::vector<double> probs_;
  std::vector<double> info_;
};

// Distribution on {0, 1, 2, ...} given by a pmf rule, truncated where the
// remaining tail mass drops below tail_bound.
struct CountableDistribution {
  std::string name;
  std::function<double(std::uint64_t)> pmf;
  double tail_bound = 1e-12;
  std::uint64_t max_support = std::uint64_t{1} << 24;

  // Truncated and renormalized support.
  FiniteDistribution truncate() const;
  // Mass discarded by truncate() before renormalization.
  double truncation_tail() const;
};

// P(k) = q (1-q)^k, k >= 0.
CountableDistribution geometric(double q, double tail_bound = 1e-12);
CountableDistribution poisson(double lambda, double tail_bound = 1e-12);

struct MomentSummary {
  double H = 0.0;       // bits
  double sigma2 = 0.0;  // bits^2
  double mu3 = 0.0;     // bits^3
};

double entropy(const FiniteDistribution& d);
double varentropy(const FiniteDistribution& d);
double third_abs_moment(const FiniteDistribution& d);
MomentSummary moments(const FiniteDistribution& d);

// Binary entropy function in bits.
double binary_entropy(double p);

// Order-k chain on alphabet {0..|A|-1}. States are the last k symbols,
// indexed s = sum_i x_i |A|^(k-i); emitting a moves s to (s|A| + a) mod |A|^k.
class MarkovSource {
 public:
  // kernel has |A|^k rows with either |A| columns (conditional law of the
  // next symbol) or |A|^k columns (expanded shift matrix). An empty initial
  // law defaults to the invariant law of the chain.
  MarkovSource(std::size_t alphabet_size, int order,
               std::vector<std::vector<double>> kernel,
               std::vector<double> initial = {});

  // Order-1 chain whose rows all equal d.
  static MarkovSource iid(const FiniteDistribution& d);

  std::size_t alphabet_size() const { return alphabet_; }
  int order() const { return order_; }
  std::size_t num_states() const { return states_; }
  double cond(std::size_t s, std::size_t a) const {
    return cond_[s * alphabet_ + a];
  }
  std::size_t next_state(std::size_t s, std::size_t a) const {
    return (s * alphabet_ + a) % states_;
  }
  const std::vector<double>& initial() const { return initial_; }

 private:
  std::size_t alphabet_;
  int order_;
  std::size_t states_;
  std::vector<double> cond_;
  std::vector<double> initial_;
};

bool is_irreducible(const MarkovSource& src);
// Period of an irreducible chain; 1 means aperiodic.
int period(const MarkovSource& src);

// Unique invariant law of an irreducible chain (periodic chains allowed).
std::vector<double> invariant_law(const MarkovSource& src);

// Requires an irreducible aperiodic chain.
FiniteDistribution stationary_distribution(const MarkovSource& src);

double markov_entropy_rate(const MarkovSource& src);

struct VarentropyRate {
  double value = 0.0;
  double error_bar = 0.0;
  long lags = 0;
};

VarentropyRate markov_varentropy_rate(const MarkovSource& src,
                                      double tol = 1e-13,
                                      long max_lags = 1000000);

// H(X^n) for the chain started from its initial law.
double markov_block_entropy(const MarkovSource& src, int n);

// Largest per-symbol information log2(1 / min positive transition) over
// reachable transitions; the linear-information-growth constant of the chain.
double markov_information_growth(const MarkovSource& src);

}  // namespace fbl

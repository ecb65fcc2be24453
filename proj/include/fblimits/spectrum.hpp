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
#include <vector>

#include "fblimits/bigcount.hpp"
#include "fblimits/sources.hpp"

namespace fbl {

// One atom of the information spectrum: `count` strings, each with
// information `info` bits, carrying total probability `prob`.
struct SpectrumMass {
  double info = 0.0;
  double prob = 0.0;
  BigCount count = 1;
};

struct SpectrumBudget {
  std::uint64_t max_type_classes = 2'000'000;
  std::uint64_t max_enumeration = 20'000;
};

// Two info values closer than this are treated as the same probability.
double merge_tolerance(double info);

// Distribution of the information of X^n: masses sorted by increasing info,
// i.e. by decreasing per-string probability. Immutable after construction.
class InformationSpectrum {
 public:
  // Sorts and merges; per-mass probabilities are recomputed as
  // count * 2^-info unless `keep_probs` is set.
  static InformationSpectrum exact(std::vector<SpectrumMass> masses, int n,
                                   bool keep_probs = false);
  // Empirical spectrum of observed information values.
  static InformationSpectrum empirical(std::vector<double> values, int n);

  int n() const { return n_; }
  bool is_exact() const { return exact_; }
  std::uint64_t sample_size() const { return samples_; }
  std::size_t size() const { return masses_.size(); }
  const std::vector<SpectrumMass>& masses() const { return masses_; }
  const SpectrumMass& mass(std::size_t i) const { return masses_[i]; }

  // Number of positive-probability strings. Exact spectra only.
  const BigCount& total_count() const;
  // Strings in masses 0..i inclusive. Exact spectra only.
  const BigCount& cum_count(std::size_t i) const;
  // Strings in masses 0..i-1.
  BigCount count_before(std::size_t i) const;
  // Sum of prob over masses i.. (compensated); tail_prob(size()) = 0.
  double tail_prob(std::size_t i) const { return tail_[i]; }
  // Sum of prob over masses 0..i-1 (compensated).
  double head_prob(std::size_t i) const { return head_[i]; }

  // First mass with info >= a (within tolerance).
  std::size_t lower_index(double a) const;
  // First mass with info > a (beyond tolerance).
  std::size_t upper_index(double a) const;

  double mean() const;
  double variance() const;
  double second_moment() const;
  double third_abs_central_moment() const;
  double min_info() const { return masses_.front().info; }
  double max_info() const { return masses_.back().info; }

 private:
  void finalize();
  void require_exact(const char* what) const;

  std::vector<SpectrumMass> masses_;
  std::vector<BigCount> cum_counts_;
  std::vector<double> head_, tail_;
  int n_ = 0;
  bool exact_ = true;
  std::uint64_t samples_ = 0;
};

InformationSpectrum iid_spectrum(const FiniteDistribution& dist, int n,
                                 const SpectrumBudget& budget = {});

// Spectrum of one draw from Binomial(trials, p), built from log-pmf values
// so that probabilities far below the double range keep exact ranks.
InformationSpectrum binomial_spectrum(std::uint64_t trials, double p);

InformationSpectrum markov_spectrum_exact(const MarkovSource& src, int n,
                                          const SpectrumBudget& budget = {});

// Information of `samples` independent sample paths of length n. Worker
// threads process fixed chunks with derived seeds, so the result does not
// depend on `threads` (0 picks the hardware concurrency).
std::vector<double> markov_information_samples(const MarkovSource& src, int n,
                                               std::uint64_t samples,
                                               std::uint64_t seed,
                                               unsigned threads = 0);

InformationSpectrum markov_spectrum_mc(const MarkovSource& src, int n,
                                       std::uint64_t samples,
                                       std::uint64_t seed,
                                       unsigned threads = 0);

// P[iota >= a]
double ccdf(const InformationSpectrum& spec, double a);
// P[iota <= a]
double cdf(const InformationSpectrum& spec, double a);

// Strings with per-string probability > 1/beta, i.e. info < log2 beta.
BigCount count_M(const InformationSpectrum& spec, double beta);
// Strings with per-string probability >= 1/beta.
BigCount count_M_plus(const InformationSpectrum& spec, double beta);
// Same with the threshold given as a = log2 beta, for beta beyond doubles.
BigCount count_M_log2(const InformationSpectrum& spec, double a);
BigCount count_M_plus_log2(const InformationSpectrum& spec, double a);

// Smallest info value v with P[iota <= v] >= p; p = 1 gives the maximum.
double quantile(const InformationSpectrum& spec, double p);

}  // namespace fbl

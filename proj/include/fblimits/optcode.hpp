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

#include <cstdint>
#include <string>
#include <vector>

#include "fblimits/bigcount.hpp"
#include "fblimits/sources.hpp"
#include "fblimits/spectrum.hpp"

namespace fbl {

// Split of the ranked strings at `threshold`: the top `threshold` strings
// are masses [0, mass_index) plus `partial_count` strings of mass_index.
struct RankCut {
  BigCount threshold;
  std::size_t mass_index = 0;
  BigCount cum_count_below;
  double cum_prob_below = 0.0;
  BigCount partial_count;
  // Probability of the partial_count strings of the straddling mass.
  double partial_prob = 0.0;
  // Probability of the strings ranked after the threshold.
  double excluded_prob = 0.0;
};

RankCut rank_cut(const InformationSpectrum& spec, const BigCount& threshold);

// Length of the longest codeword, floor(log2 of the number of strings).
std::uint64_t max_codeword_length(const InformationSpectrum& spec);

// P[l(f*(X^n)) >= k]: mass outside the 2^k - 1 most likely strings.
double epsilon_star(const InformationSpectrum& spec, std::uint64_t k);

// Smallest k with epsilon_star(k) <= eps.
std::uint64_t optimal_length_threshold(const InformationSpectrum& spec, double eps);

// optimal_length_threshold / n.
double R_star(const InformationSpectrum& spec, double eps);

struct ThresholdRate {
  double eps = 1.0;
  BigCount M;
  // ceil(log2(1 + M)) - 1; -1 marks the empty-codeword threshold (M = 0).
  std::int64_t length = -1;
  double rate = 0.0;
};

// Rate and excess probability attached to the information threshold a.
ThresholdRate R_star_via_viva(const InformationSpectrum& spec, double a);

struct CodelengthDistribution {
  int n = 0;
  // probs_by_length[j] = P[l = j]
  std::vector<double> probs_by_length;
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
  // E[(l - iota)^2] and E[iota - l]
  double gap2 = 0.0;
  double mean_gap = 0.0;
};

CodelengthDistribution codelength_distribution(const InformationSpectrum& spec);

// Minimal average rate from the length distribution.
double Rbar(const InformationSpectrum& spec);
// Same quantity as (1/n) sum_{k>=1} epsilon_star(k).
double Rbar_from_epsilon(const InformationSpectrum& spec);

// |Rbar - (integral of R*(n, x) over [0,1] - 1/n)| with the integral
// taken exactly over the R* staircase.
double integral_identity_check(const InformationSpectrum& spec);

// Optimal codelength moments for a source uniform on M outcomes.
mpq_class expected_length_equiprobable_exact(std::uint64_t M);
double expected_length_equiprobable(std::uint64_t M);
double var_length_equiprobable(std::uint64_t M);

// Minimal P[l >= j] over prefix codes.
double prefix_epsilon(const InformationSpectrum& spec, std::uint64_t j);
// Minimal prefix-code rate at excess probability eps.
double prefix_R(const InformationSpectrum& spec, double eps);

// The optimal code itself for enumerable alphabets: strings ranked by
// probability (descending), ties broken lexicographically in the symbol
// order of the distribution, rank r mapped to the r-th string of
// {empty, 0, 1, 00, 01, ...}.
class OptimalCode {
 public:
  OptimalCode(const FiniteDistribution& dist, int n,
              std::uint64_t max_enumeration = 20'000);

  std::string encode(const std::vector<std::int64_t>& x) const;
  std::vector<std::int64_t> decode(const std::string& bits) const;

  // 1-based rank of a string of symbol ids.
  std::uint64_t rank(const std::vector<std::int64_t>& x) const;
  std::size_t size() const { return order_.size(); }
  int n() const { return n_; }

 private:
  std::uint64_t index_of(const std::vector<std::int64_t>& x) const;

  FiniteDistribution dist_;
  int n_;
  std::vector<std::uint64_t> order_;  // rank-1 -> string index
  std::vector<std::uint64_t> rank_;   // string index -> rank-1
};

// Binary string of the given 1-based rank and its inverse.
std::string rank_to_bits(std::uint64_t r);
std::uint64_t bits_to_rank(const std::string& bits);

}  // namespace fbl

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
#include <vector>

#include "fblimits/bigcount.hpp"
#include "fblimits/sources.hpp"
#include "fblimits/spectrum.hpp"

namespace fbl {

// Per distinct probability value: J strings share it, M strings are more
// likely.
struct MassClass {
  double class_prob = 0.0;  // J * per-string probability
  BigCount J;
  BigCount M;
};

std::vector<MassClass> mass_profile(const InformationSpectrum& spec);

// Expected value over uniform binnings of the probability that the in-bin
// maximum-likelihood decoder (uniform tie-breaking) recovers one string of
// a class: sum_{l<J} C(J-1,l) / (N^l (1+l)) (1-1/N)^(M+J-l-1).
double binning_success_term(const BigCount& J, const BigCount& M, std::uint64_t N);
// Same sum evaluated term by term; for cross-checks with small J.
double binning_success_term_direct(std::uint64_t J, const BigCount& M,
                                   std::uint64_t N);

// Exact error of random binning into N bins, averaged over all binnings.
double binning_error_exact(const InformationSpectrum& spec, std::uint64_t N);
double binning_error_exact(const FiniteDistribution& dist, std::uint64_t N);

struct BinningEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Each trial draws fresh bin labels for every symbol and one source symbol.
// Deterministic for a seed regardless of `threads`.
BinningEstimate binning_error_mc(const FiniteDistribution& dist, std::uint64_t N,
                                 std::uint64_t trials, std::uint64_t seed,
                                 unsigned threads = 0);

}  // namespace fbl

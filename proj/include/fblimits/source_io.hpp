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
#include <optional>
#include <string>

#include "json.hpp"

#include "fblimits/bounds.hpp"
#include "fblimits/sources.hpp"
#include "fblimits/spectrum.hpp"

namespace fbl {

// A parsed source description:
//   {"type": "memoryless", "probs": [...]}
//   {"type": "markov", "order": k, "kernel": [[...]], "initial": [...]}
//   {"type": "geometric", "param": q}      P(k) = q (1-q)^k
//   {"type": "poisson", "param": lambda}
//   {"type": "binomial", "trials": t, "param": p}   one draw per symbol
// Countable types accept "tail_bound".
struct SourceSpec {
  std::string type;
  std::optional<FiniteDistribution> memoryless;
  std::optional<MarkovSource> markov;
  std::uint64_t trials = 0;
  double param = 0.0;
  nlohmann::json raw;

  bool is_memoryless() const { return memoryless.has_value(); }
  bool is_markov() const { return markov.has_value(); }

  InformationSpectrum spectrum(int n, const SpectrumBudget& budget = {}) const;
  GaussianParams gaussian(std::optional<double> A_markov = std::nullopt) const;
};

SourceSpec parse_source(const nlohmann::json& j);
// Accepts inline JSON (starting with '{') or a file path.
SourceSpec load_source(const std::string& path_or_inline);

}  // namespace fbl

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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fblimits/spectrum.hpp"

namespace fbl {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string subcommand;
  // Path to a source JSON file or the JSON text itself.
  std::string source;
  std::vector<int> n_list;
  int n_min = 0, n_max = 0, n_step = 1;
  std::vector<double> eps;
  std::uint64_t seed = 0;
  // "-" writes the table to the output stream and skips the sidecar.
  std::string output = "-";
  std::string format = "csv";
  bool monte_carlo = false;
  std::uint64_t samples = 100'000;
  std::uint64_t trials = 100'000;
  std::vector<std::uint64_t> bins;
  std::optional<double> markov_A;
  int points = 100;
  unsigned threads = 0;
  SpectrumBudget budget;
  std::uint64_t max_trials = 100'000'000;
};

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitBudget = 3,
  kExitNumeric = 4,
};

// Budgets from FBLIMITS_MAX_TYPE_CLASSES, FBLIMITS_MAX_ENUMERATION and
// FBLIMITS_MAX_TRIALS layered over the built-in defaults.
RunConfig default_config();

// Runs one subcommand. Tables go to `out` (or the configured file); errors
// are reported on `err` as a one-line JSON object.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv into a config and runs it.
int cli_main(int argc, char** argv);

}  // namespace fbl

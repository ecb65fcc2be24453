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

#include "fblimits/source_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "fblimits/error.hpp"

namespace fbl {

namespace {

template <typename T>
T get_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) {
    throw ValidationError(std::string("source is missing \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad \"") + key + "\": " + e.what());
  }
}

}  // namespace

SourceSpec parse_source(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("source must be a JSON object");
  SourceSpec s;
  s.raw = j;
  s.type = get_field<std::string>(j, "type");
  const double tail = j.value("tail_bound", 1e-12);
  if (s.type == "memoryless") {
    s.memoryless = FiniteDistribution(get_field<std::vector<double>>(j, "probs"));
  } else if (s.type == "markov") {
    auto kernel = get_field<std::vector<std::vector<double>>>(j, "kernel");
    int order = j.value("order", 1);
    std::vector<double> initial;
    if (j.contains("initial")) initial = get_field<std::vector<double>>(j, "initial");
    if (kernel.empty()) throw ValidationError("kernel is empty");
    // |A| from the row count |A|^k.
    double root = std::pow(static_cast<double>(kernel.size()), 1.0 / order);
    std::size_t alphabet = static_cast<std::size_t>(std::llround(root));
    std::size_t states = 1;
    for (int i = 0; i < order; ++i) states *= alphabet;
    if (states != kernel.size()) {
      throw ValidationError("kernel row count is not |A|^order");
    }
    s.markov = MarkovSource(alphabet, order, std::move(kernel), std::move(initial));
  } else if (s.type == "geometric") {
    s.param = get_field<double>(j, "param");
    s.memoryless = geometric(s.param, tail).truncate();
  } else if (s.type == "poisson") {
    s.param = get_field<double>(j, "param");
    s.memoryless = poisson(s.param, tail).truncate();
  } else if (s.type == "binomial") {
    s.trials = get_field<std::uint64_t>(j, "trials");
    s.param = get_field<double>(j, "param");
    if (!(s.param > 0.0 && s.param < 1.0)) {
      throw ValidationError("binomial param must lie in (0,1)");
    }
  } else {
    throw ValidationError("unknown source type \"" + s.type + "\"");
  }
  return s;
}

SourceSpec load_source(const std::string& path_or_inline) {
  std::string text;
  auto first = path_or_inline.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_inline[first] == '{') {
    text = path_or_inline;
  } else {
    std::ifstream in(path_or_inline);
    if (!in) throw ValidationError("cannot open source file " + path_or_inline);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("malformed source JSON: ") + e.what());
  }
  return parse_source(j);
}

InformationSpectrum SourceSpec::spectrum(int n, const SpectrumBudget& budget) const {
  if (memoryless) return iid_spectrum(*memoryless, n, budget);
  if (markov) return markov_spectrum_exact(*markov, n, budget);
  if (n != 1) {
    throw UnsupportedError("binomial sources are single-symbol; use n = 1");
  }
  return binomial_spectrum(trials, param);
}

GaussianParams SourceSpec::gaussian(std::optional<double> A_markov) const {
  if (memoryless) {
    auto p = GaussianParams::of(*memoryless);
    p.A_markov = A_markov;
    return p;
  }
  if (markov) return GaussianParams::of(*markov, A_markov);
  auto spec = binomial_spectrum(trials, param);
  GaussianParams p;
  p.H = spec.mean();
  p.sigma2 = spec.variance();
  p.mu3 = spec.third_abs_central_moment();
  p.A_markov = A_markov;
  return p;
}

}  // namespace fbl

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

#include <optional>
#include <string>
#include <vector>

#include "fblimits/bounds.hpp"
#include "fblimits/sources.hpp"
#include "fblimits/spectrum.hpp"

namespace fbl {

// Var(l(f*(X^n))) from the exact length distribution.
double var_codelength(const InformationSpectrum& spec);
// E[(l(f*(X^n)) - iota(X^n))^2]
double second_moment_gap(const InformationSpectrum& spec);

struct DispersionPoint {
  int n = 0;
  double mean_len = 0.0, mean_info = 0.0;
  double second_len = 0.0, second_info = 0.0;
  double var_len = 0.0, var_info = 0.0;
  double gap2 = 0.0;
  // |Var(l) - Var(iota)| <= 2 gap2 + 2 sqrt(gap2 Var(iota))
  bool variance_chain_ok = false;
  // E[l] <= H(X^n) <= E[l] + log2(H(X^n) + 1) + log2 e
  bool entropy_bound_ok = false;
};

struct DispersionTrace {
  std::vector<DispersionPoint> points;
  double sigma2_ref = 0.0;
  // Set when a blocklength exceeded its budget; later points are skipped.
  std::optional<int> stopped_at;
  std::string stop_reason;
};

DispersionPoint dispersion_point(const InformationSpectrum& spec);

DispersionTrace dispersion_estimate(const SpectrumFactory& factory,
                                    const std::vector<int>& n_list,
                                    double sigma2_ref);

// sigma^2 / H^2 of a memoryless marginal.
double normalized_dispersion(const FiniteDistribution& d);
double normalized_dispersion(const CountableDistribution& d);

struct RdRow {
  int n = 0;
  double eps = 0.0;
  double R_star = 0.0;
  // n ((R* - H) / Q^-1(eps))^2, which tends to sigma^2.
  double value = 0.0;
  double rel_diff = 0.0;
  // Interval for `value` implied by the achievability/converse bracket.
  double lo = 0.0, hi = 0.0;
  bool bracket_valid = false;
  // n (R* - H)^2 / (2 ln(1/eps))
  double log_form = 0.0;
};

std::vector<RdRow> rd_characterization_check(const SpectrumFactory& factory,
                                             const GaussianParams& params,
                                             const std::vector<double>& eps_list,
                                             const std::vector<int>& n_list);

// max iota(x^n) / n over the support.
double information_growth(const InformationSpectrum& spec);

struct Figure4Row {
  std::string family;
  double param = 0.0;
  double H = 0.0;
  double D_over_H2 = 0.0;
};

std::vector<Figure4Row> normalized_dispersion_curves(int points_per_family);

}  // namespace fbl

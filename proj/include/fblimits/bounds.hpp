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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fblimits/sources.hpp"
#include "fblimits/spectrum.hpp"

namespace fbl {

double gaussian_phi(double x);
double gaussian_Q(double x);
double gaussian_Phi(double x);
// Inverse of Q on (0, 1).
double gaussian_Q_inv(double p);

struct GaussianParams {
  double H = 0.0;
  double sigma2 = 0.0;
  double mu3 = 0.0;
  // Berry-Esseen constant of a Markov chain; has no closed form, so it is a
  // configuration input (see markov_BE_calibrate).
  std::optional<double> A_markov;

  static GaussianParams of(const FiniteDistribution& d);
  static GaussianParams of(const MarkovSource& src, std::optional<double> A);
};

enum class BoundKind { Achievability, Converse, Approximation };
const char* to_string(BoundKind k);

struct BoundReport {
  double value = 0.0;
  BoundKind kind = BoundKind::Approximation;
  bool valid = true;
  std::string validity_condition;
  std::optional<double> n0;
  std::string provenance;
};

// Lowest R with P[iota/n >= R] <= eps. Works on sampled spectra too.
BoundReport R_upper_quantile(const InformationSpectrum& spec, double eps);

// Lower bound on P[l(f*) >= k]: max over tau > 0 of P[iota >= k + tau] - 2^-tau.
BoundReport converse_optimized(const InformationSpectrum& spec, std::uint64_t k);

struct CodeConverseCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

// For a code with the given codeword lengths (one per symbol of dist):
// non-prefix: lhs = P[l <= iota - tau], rhs = 2^-tau (floor(log2 |X|) + 1);
// prefix:     lhs = P[l <  iota - tau], rhs = 2^-tau.
CodeConverseCheck converse_codelength_vs_info(const FiniteDistribution& dist,
                                              const std::vector<int>& lengths,
                                              double tau, bool prefix);

// H + sigma Q^-1(eps)/sqrt(n) - log2(n)/(2n)
double approx_Rstar(const GaussianParams& p, long n, double eps);

BoundReport achievability_iid(const GaussianParams& p, long n, double eps);
BoundReport converse_iid(const GaussianParams& p, long n, double eps);
// Blocklength beyond which converse_iid holds.
double converse_iid_n0(const GaussianParams& p, double eps);

// Reference expansion with the lattice-free third-order term. Not a proven
// bound.
BoundReport strassen_expansion(const GaussianParams& p, long n, double eps);

BoundReport markov_achievability(const GaussianParams& p, long n, double eps);
BoundReport markov_converse(const GaussianParams& p, long n, double eps);

// sup_z |P[(iota - mean)/sd <= z] - Phi(z)| over the jump points of the
// spectrum, both one-sided limits included.
double normal_sup_distance(const InformationSpectrum& spec, double mean, double sd);

struct BerryEsseenCalibration {
  double A_hat = 0.0;
  // Monte-Carlo error bar (95% DKW band scaled by sqrt(n)).
  double error_bar = 0.0;
  std::vector<int> n_list;
  std::vector<double> scaled_distance;  // sqrt(n) * sup distance per n
};

BerryEsseenCalibration markov_BE_calibrate(const MarkovSource& src,
                                           const std::vector<int>& n_list,
                                           std::uint64_t samples,
                                           std::uint64_t seed,
                                           unsigned threads = 0);

// Blocklength from the normal approximation with R = (1 + eta) H; none when
// R <= H.
std::optional<long> n_star(const GaussianParams& p, double R, double eps);

struct NStarScan {
  // First n with R*(n, eps) <= R.
  std::optional<int> first;
  // First n that starts `window` consecutive satisfying blocklengths.
  std::optional<int> confirmed;
  int scanned_to = 0;
};

using SpectrumFactory = std::function<InformationSpectrum(int)>;

NStarScan n_star_exact(const SpectrumFactory& factory, double R, double eps,
                       int n_max, int window = 50);

}  // namespace fbl

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

#include "fblimits/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fblimits/error.hpp"
#include "fblimits/optcode.hpp"

namespace fbl {

namespace {

constexpr double kLog2e = std::numbers::log2e;
constexpr double kPi = std::numbers::pi;

// Phi^-1(p) for p in (0, 1/2]: rational approximation, then one Halley step.
double phi_inv_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  double x;
  if (p < 0.02425) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  double u = e * std::sqrt(2.0 * kPi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

void check_sigma(const GaussianParams& p) {
  if (!(p.sigma2 > 0.0)) {
    throw UnsupportedError("bound needs a strictly positive varentropy");
  }
}

void check_eps_open_half(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("eps must lie in (0, 1/2)");
}

}  // namespace

double gaussian_phi(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

double gaussian_Q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gaussian_Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double gaussian_Q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("Q_inv needs p in (0,1)");
  if (p == 0.5) return 0.0;
  return p < 0.5 ? -phi_inv_lower(p) : phi_inv_lower(1.0 - p);
}

GaussianParams GaussianParams::of(const FiniteDistribution& d) {
  auto m = moments(d);
  GaussianParams p;
  p.H = m.H;
  p.sigma2 = m.sigma2;
  p.mu3 = m.mu3;
  return p;
}

GaussianParams GaussianParams::of(const MarkovSource& src, std::optional<double> A) {
  GaussianParams p;
  p.H = markov_entropy_rate(src);
  p.sigma2 = markov_varentropy_rate(src).value;
  p.A_markov = A;
  return p;
}

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Achievability:
      return "achievability";
    case BoundKind::Converse:
      return "converse";
    case BoundKind::Approximation:
      return "approximation";
  }
  return "unknown";
}

BoundReport R_upper_quantile(const InformationSpectrum& spec, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0,1)");
  BoundReport r;
  r.value = quantile(spec, 1.0 - eps) / spec.n();
  r.kind = BoundKind::Achievability;
  r.valid = true;
  r.validity_condition = "all n";
  r.provenance = spec.is_exact() ? "information-spectrum quantile"
                                 : "information-spectrum quantile (sampled)";
  return r;
}

BoundReport converse_optimized(const InformationSpectrum& spec, std::uint64_t k) {
  const double kk = static_cast<double>(k);
  double best = 0.0;
  // P[iota >= k + tau] is constant between jumps, so the best tau in each
  // gap is the jump offset itself.
  for (std::size_t j = 0; j < spec.size(); ++j) {
    double tau = spec.mass(j).info - kk;
    if (tau <= 0.0) continue;
    best = std::max(best, spec.tail_prob(j) - std::exp2(-tau));
  }
  for (double tau = 1.0 / 64.0; tau <= std::max(1.0, double(spec.n())); tau *= 2.0) {
    best = std::max(best, ccdf(spec, kk + tau) - std::exp2(-tau));
  }
  BoundReport r;
  r.value = best;
  r.kind = BoundKind::Converse;
  r.valid = true;
  r.validity_condition = "any tau > 0";
  r.provenance = "optimized spectrum converse on P[l >= k]";
  return r;
}

CodeConverseCheck converse_codelength_vs_info(const FiniteDistribution& dist,
                                              const std::vector<int>& lengths,
                                              double tau, bool prefix) {
  if (lengths.size() != dist.size()) {
    throw ValidationError("one codeword length per symbol required");
  }
  if (!(tau >= 0.0)) throw ValidationError("tau must be >= 0");
  // Boundary cases count toward the left side, which only makes the
  // check stricter.
  constexpr double slack = 1e-12;
  double lhs = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    double gap = dist.info(i) - tau - lengths[i];
    bool hit = prefix ? gap > -slack : gap >= -slack;
    if (hit) lhs += dist.prob(i);
  }
  double rhs = std::exp2(-tau);
  if (!prefix) {
    BigCount m = static_cast<unsigned long>(dist.size());
    rhs *= static_cast<double>(bit_length(m));
  }
  return {lhs, rhs};
}

double approx_Rstar(const GaussianParams& p, long n, double eps) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0,1)");
  check_sigma(p);
  double nn = static_cast<double>(n);
  return p.H + std::sqrt(p.sigma2) * gaussian_Q_inv(eps) / std::sqrt(nn) -
         std::log2(nn) / (2.0 * nn);
}

BoundReport achievability_iid(const GaussianParams& p, long n, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw ValidationError("eps must lie in (0, 1/2]");
  check_sigma(p);
  const double nn = static_cast<double>(n);
  const double sigma = std::sqrt(p.sigma2);
  const double s3 = p.sigma2 * sigma;
  const double shift = p.mu3 / (s3 * std::sqrt(nn));
  BoundReport r;
  r.kind = BoundKind::Achievability;
  r.validity_condition = "Phi(Q^-1(eps)) + mu3/(sigma^3 sqrt(n)) < 1";
  r.provenance = "Berry-Esseen achievability, memoryless source";
  // Phi^-1(Phi(Q^-1(eps)) + shift) = Q^-1(eps - shift).
  if (eps - shift <= 0.0) {
    r.valid = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  double inner = gaussian_Q_inv(eps - shift);
  r.value = approx_Rstar(p, n, eps) +
            std::log2(kLog2e / std::sqrt(2.0 * kPi * p.sigma2) + p.mu3 / s3) / nn +
            p.mu3 / (p.sigma2 * gaussian_phi(inner)) / nn;
  r.valid = true;
  return r;
}

double converse_iid_n0(const GaussianParams& p, double eps) {
  check_eps_open_half(eps);
  check_sigma(p);
  double s3 = p.sigma2 * std::sqrt(p.sigma2);
  double q = gaussian_Q_inv(eps);
  double f = 1.0 + p.mu3 / (2.0 * s3);
  double g = gaussian_phi(q) * q;
  return 0.25 * f * f / (g * g);
}

BoundReport converse_iid(const GaussianParams& p, long n, double eps) {
  check_eps_open_half(eps);
  check_sigma(p);
  const double nn = static_cast<double>(n);
  const double s3 = p.sigma2 * std::sqrt(p.sigma2);
  BoundReport r;
  r.kind = BoundKind::Converse;
  r.n0 = converse_iid_n0(p, eps);
  r.valid = nn > *r.n0;
  r.validity_condition = "n > n0";
  r.provenance = "Berry-Esseen converse, memoryless source";
  r.value = approx_Rstar(p, n, eps) -
            (p.mu3 / 2.0 + s3) / (nn * p.sigma2 * gaussian_phi(gaussian_Q_inv(eps)));
  return r;
}

BoundReport strassen_expansion(const GaussianParams& p, long n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("eps must lie in (0,1)");
  check_sigma(p);
  const double nn = static_cast<double>(n);
  const double q = gaussian_Q_inv(eps);
  BoundReport r;
  r.kind = BoundKind::Approximation;
  r.valid = true;
  r.validity_condition = "reference expansion; non-lattice information assumed";
  r.provenance = "third-order expansion, non-rigorous reference";
  r.value = p.H + std::sqrt(p.sigma2) * q / std::sqrt(nn) -
            (std::log2(2.0 * kPi * p.sigma2 * nn) + q * q * kLog2e) / (2.0 * nn) +
            p.mu3 * (q * q - 1.0) / (6.0 * p.sigma2 * nn);
  return r;
}

BoundReport markov_achievability(const GaussianParams& p, long n, double eps) {
  check_eps_open_half(eps);
  check_sigma(p);
  if (!p.A_markov) throw ValidationError("Markov bound needs A_markov");
  const double A = *p.A_markov;
  const double nn = static_cast<double>(n);
  const double sigma = std::sqrt(p.sigma2);
  const double q = gaussian_Q_inv(eps);
  const double f = gaussian_phi(q);
  BoundReport r;
  r.kind = BoundKind::Achievability;
  r.n0 = 8.0 * A * A / (kPi * std::numbers::e * f * f * f * f);
  r.valid = nn >= *r.n0;
  r.validity_condition = "n >= 8 A^2 / (pi e phi(Q^-1(eps))^4)";
  r.provenance = "Markov achievability with configured Berry-Esseen constant A";
  r.value = p.H + sigma * q / std::sqrt(nn) + 2.0 * A * sigma / f / nn;
  return r;
}

BoundReport markov_converse(const GaussianParams& p, long n, double eps) {
  check_eps_open_half(eps);
  check_sigma(p);
  if (!p.A_markov) throw ValidationError("Markov bound needs A_markov");
  const double A = *p.A_markov;
  const double nn = static_cast<double>(n);
  const double sigma = std::sqrt(p.sigma2);
  const double q = gaussian_Q_inv(eps);
  const double f = gaussian_phi(q);
  const double t = (A + 1.0) / (q * f);
  BoundReport r;
  r.kind = BoundKind::Converse;
  r.n0 = t * t;
  r.valid = nn >= *r.n0;
  r.validity_condition = "n >= ((A + 1) / (Q^-1(eps) phi(Q^-1(eps))))^2";
  r.provenance = "Markov converse with configured Berry-Esseen constant A";
  double C = sigma * (A + 1.0) / f + 1.0;
  r.value = p.H + sigma * q / std::sqrt(nn) - std::log2(nn) / (2.0 * nn) - C / nn;
  return r;
}

double normal_sup_distance(const InformationSpectrum& spec, double mean, double sd) {
  if (!(sd > 0.0)) throw NumericError("standardization needs sd > 0");
  double worst = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double z = (spec.mass(i).info - mean) / sd;
    double phi = gaussian_Phi(z);
    worst = std::max(worst, std::abs(spec.head_prob(i) - phi));
    worst = std::max(worst, std::abs(spec.head_prob(i + 1) - phi));
  }
  return worst;
}

BerryEsseenCalibration markov_BE_calibrate(const MarkovSource& src,
                                           const std::vector<int>& n_list,
                                           std::uint64_t samples,
                                           std::uint64_t seed, unsigned threads) {
  if (n_list.empty()) throw ValidationError("n_list is empty");
  const double H = markov_entropy_rate(src);
  const double sigma2 = markov_varentropy_rate(src).value;
  if (!(sigma2 > 1e-12)) {
    throw UnsupportedError("Berry-Esseen calibration needs positive varentropy");
  }
  const double sigma = std::sqrt(sigma2);
  const double dkw = std::sqrt(std::log(2.0 / 0.05) / (2.0 * double(samples)));
  BerryEsseenCalibration cal;
  cal.n_list = n_list;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    int n = n_list[i];
    auto spec = markov_spectrum_mc(src, n, samples, seed + i, threads);
    double sn = std::sqrt(static_cast<double>(n));
    double d = normal_sup_distance(spec, n * H, sigma * sn);
    cal.scaled_distance.push_back(sn * d);
    if (sn * d >= cal.A_hat) {
      cal.A_hat = sn * d;
      cal.error_bar = sn * dkw;
    }
  }
  return cal;
}

std::optional<long> n_star(const GaussianParams& p, double R, double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) throw ValidationError("eps must lie in (0, 1/2]");
  check_sigma(p);
  if (!(R > p.H) || !(p.H > 0.0)) return std::nullopt;
  double eta = R / p.H - 1.0;
  double q = gaussian_Q_inv(eps) / (1.0 + eta);
  double n = p.sigma2 / (p.H * p.H) * q * q;
  return std::max(1L, static_cast<long>(std::ceil(n)));
}

NStarScan n_star_exact(const SpectrumFactory& factory, double R, double eps,
                       int n_max, int window) {
  if (n_max < 1 || window < 1) throw ValidationError("bad scan range");
  NStarScan scan;
  int run_start = 0, run = 0;
  for (int n = 1; n <= n_max; ++n) {
    scan.scanned_to = n;
    bool ok = R_star(factory(n), eps) <= R;
    if (ok) {
      if (!scan.first) scan.first = n;
      if (run == 0) run_start = n;
      if (++run >= window) {
        scan.confirmed = run_start;
        break;
      }
    } else {
      run = 0;
    }
  }
  return scan;
}

}  // namespace fbl

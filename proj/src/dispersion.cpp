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

#include "fblimits/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>
#include <numbers>

#include "fblimits/error.hpp"
#include "fblimits/optcode.hpp"

namespace fbl {

double var_codelength(const InformationSpectrum& spec) {
  return codelength_distribution(spec).variance;
}

double second_moment_gap(const InformationSpectrum& spec) {
  return codelength_distribution(spec).gap2;
}

DispersionPoint dispersion_point(const InformationSpectrum& spec) {
  auto len = codelength_distribution(spec);
  DispersionPoint p;
  p.n = spec.n();
  p.mean_len = len.mean;
  p.second_len = len.second_moment;
  p.var_len = len.variance;
  p.mean_info = spec.mean();
  p.second_info = spec.second_moment();
  p.var_info = spec.variance();
  p.gap2 = len.gap2;
  const double tol = 1e-9 * std::max(1.0, p.second_info);
  p.variance_chain_ok = std::abs(p.var_len - p.var_info) <=
                        2.0 * p.gap2 + 2.0 * std::sqrt(p.gap2 * p.var_info) + tol;
  p.entropy_bound_ok =
      p.mean_len <= p.mean_info + tol &&
      p.mean_info - p.mean_len <=
          std::log2(p.mean_info + 1.0) + std::numbers::log2e + tol;
  return p;
}

DispersionTrace dispersion_estimate(const SpectrumFactory& factory,
                                    const std::vector<int>& n_list,
                                    double sigma2_ref) {
  DispersionTrace trace;
  trace.sigma2_ref = sigma2_ref;
  const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
  // Points are independent; batches run concurrently and are assembled in
  // n_list order so the first over-budget n ends the trace.
  for (std::size_t start = 0; start < n_list.size(); start += batch) {
    std::size_t end = std::min(n_list.size(), start + batch);
    std::vector<std::future<DispersionPoint>> jobs;
    for (std::size_t i = start; i < end; ++i) {
      int n = n_list[i];
      jobs.push_back(std::async(std::launch::async,
                                [&factory, n] { return dispersion_point(factory(n)); }));
    }
    for (std::size_t i = start; i < end; ++i) {
      try {
        trace.points.push_back(jobs[i - start].get());
      } catch (const BudgetError& e) {
        trace.stopped_at = n_list[i];
        trace.stop_reason = e.what();
        for (std::size_t j = i + 1; j < end; ++j) jobs[j - start].wait();
        return trace;
      }
    }
  }
  return trace;
}

double normalized_dispersion(const FiniteDistribution& d) {
  auto m = moments(d);
  if (!(m.H > 0.0)) throw NumericError("normalized dispersion needs H > 0");
  return m.sigma2 / (m.H * m.H);
}

double normalized_dispersion(const CountableDistribution& d) {
  return normalized_dispersion(d.truncate());
}

std::vector<RdRow> rd_characterization_check(const SpectrumFactory& factory,
                                             const GaussianParams& params,
                                             const std::vector<double>& eps_list,
                                             const std::vector<int>& n_list) {
  if (!(params.sigma2 > 0.0)) {
    throw UnsupportedError("characterization needs positive varentropy");
  }
  const double sigma = std::sqrt(params.sigma2);
  std::vector<RdRow> rows;
  for (int n : n_list) {
    auto spec = factory(n);
    const double nn = n, sn = std::sqrt(nn);
    for (double eps : eps_list) {
      if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("eps must lie in (0, 1/2)");
      const double q = gaussian_Q_inv(eps);
      RdRow r;
      r.n = n;
      r.eps = eps;
      r.R_star = R_star(spec, eps);
      double d = r.R_star - params.H;
      r.value = nn * d * d / (q * q);
      r.rel_diff = (r.value - params.sigma2) / params.sigma2;
      r.log_form = nn * d * d / (2.0 * std::log(1.0 / eps));

      const double approx = approx_Rstar(params, n, eps);
      auto conv = converse_iid(params, n, eps);
      auto ach = achievability_iid(params, n, eps);
      double upper = R_upper_quantile(spec, eps).value;
      if (ach.valid) upper = std::min(upper, ach.value);
      double c = nn * (conv.value - approx), cp = nn * (upper - approx);
      double center = sigma * q - std::log2(nn) / (2.0 * sn);
      double a = center + c / sn, b = center + cp / sn;
      r.bracket_valid = conv.valid && a > 0.0;
      r.lo = a > 0.0 ? a * a / (q * q) : 0.0;
      r.hi = b * b / (q * q);
      rows.push_back(r);
    }
  }
  return rows;
}

double information_growth(const InformationSpectrum& spec) {
  return spec.max_info() / spec.n();
}

std::vector<Figure4Row> normalized_dispersion_curves(int points) {
  if (points < 2) throw ValidationError("need at least 2 points per family");
  std::vector<Figure4Row> rows;
  for (int i = 0; i < points; ++i) {
    double p = 0.5 * (i + 1) / points;
    auto d = FiniteDistribution::bernoulli(p);
    auto m = moments(d);
    rows.push_back({"bernoulli", p, m.H, m.sigma2 / (m.H * m.H)});
  }
  for (int i = 0; i < points; ++i) {
    double q = 0.01 + 0.98 * i / (points - 1);
    auto m = moments(geometric(q).truncate());
    rows.push_back({"geometric", q, m.H, m.sigma2 / (m.H * m.H)});
  }
  for (int i = 0; i < points; ++i) {
    double lambda = 0.02 * std::pow(2500.0, static_cast<double>(i) / (points - 1));
    auto m = moments(poisson(lambda).truncate());
    rows.push_back({"poisson", lambda, m.H, m.sigma2 / (m.H * m.H)});
  }
  return rows;
}

}  // namespace fbl

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

#include "fblimits/binning.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

#include "fblimits/error.hpp"

namespace fbl {

namespace {

constexpr std::uint64_t kDirectLimit = 64;
constexpr std::uint64_t kChunk = 1 << 14;

// r^x for r = 1 - 1/N and a big exponent x.
double pow_r(const BigCount& x, std::uint64_t N) {
  if (sgn(x) == 0) return 1.0;
  if (N == 1) return 0.0;
  double lg = log2_big(x);
  if (lg > 1000.0) return 0.0;
  return std::exp(x.get_d() * std::log1p(-1.0 / static_cast<double>(N)));
}

}  // namespace

std::vector<MassClass> mass_profile(const InformationSpectrum& spec) {
  if (!spec.is_exact()) throw UnsupportedError("binning needs an exact spectrum");
  std::vector<MassClass> out;
  out.reserve(spec.size());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    out.push_back({spec.mass(i).prob, spec.mass(i).count, spec.count_before(i)});
  }
  return out;
}

double binning_success_term_direct(std::uint64_t J, const BigCount& M,
                                   std::uint64_t N) {
  if (J < 1 || N < 1) throw ValidationError("J and N must be >= 1");
  const double nn = static_cast<double>(N);
  const double rM = pow_r(M, N);
  double binom = 1.0, sum = 0.0;
  for (std::uint64_t l = 0; l < J; ++l) {
    if (l > 0) binom = binom * static_cast<double>(J - l) / static_cast<double>(l);
    double rest = std::pow(1.0 - 1.0 / nn, static_cast<double>(J - l - 1));
    sum += binom / (std::pow(nn, static_cast<double>(l)) * (1.0 + l)) * rest;
  }
  return sum * rM;
}

double binning_success_term(const BigCount& J, const BigCount& M, std::uint64_t N) {
  if (J < 1 || N < 1) throw ValidationError("J and N must be >= 1");
  if (J <= kDirectLimit) return binning_success_term_direct(J.get_ui(), M, N);
  if (N == 1) return sgn(M) == 0 ? 1.0 / J.get_d() : 0.0;
  // With x = 1/(N-1): sum_l C(J-1,l) x^l/(1+l) = ((1+x)^J - 1)/(J x), and
  // the prefactor (1-1/N)^(J-1) turns this into N (1 - r^J) / J.
  const double nn = static_cast<double>(N);
  double one_minus_rJ;
  if (log2_big(J) > 1000.0) {
    one_minus_rJ = 1.0;
  } else {
    one_minus_rJ = -std::expm1(J.get_d() * std::log1p(-1.0 / nn));
  }
  double inv_j = std::exp2(-log2_big(J));
  return nn * pow_r(M, N) * one_minus_rJ * inv_j;
}

double binning_error_exact(const InformationSpectrum& spec, std::uint64_t N) {
  if (N < 1) throw ValidationError("N must be >= 1");
  double success = 0.0, c = 0.0;
  for (const auto& cls : mass_profile(spec)) {
    if (cls.class_prob == 0.0) continue;
    double t = cls.class_prob * binning_success_term(cls.J, cls.M, N);
    double y = t - c;
    double s = success + y;
    c = (s - success) - y;
    success = s;
  }
  return std::clamp(1.0 - success, 0.0, 1.0);
}

double binning_error_exact(const FiniteDistribution& dist, std::uint64_t N) {
  return binning_error_exact(iid_spectrum(dist, 1), N);
}

BinningEstimate binning_error_mc(const FiniteDistribution& dist, std::uint64_t N,
                                 std::uint64_t trials, std::uint64_t seed,
                                 unsigned threads) {
  if (N < 1) throw ValidationError("N must be >= 1");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  const std::size_t m = dist.size();
  // Probability classes from the merged spectrum so that equal
  // probabilities tie exactly.
  auto spec = iid_spectrum(dist, 1);
  std::vector<std::size_t> cls(m);
  for (std::size_t i = 0; i < m; ++i) {
    cls[i] = spec.lower_index(dist.info(i));
  }
  std::vector<double> cum(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) cum[i] = (acc += dist.prob(i));

  const std::uint64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::uint64_t> errors(chunks, 0);
  auto run_chunk = [&](std::uint64_t ch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(ch),
                      static_cast<std::uint32_t>(ch >> 32), 0x62696eu};
    std::mt19937_64 gen(seq);
    std::vector<std::uint64_t> bin(m);
    std::vector<std::size_t> best;
    std::uint64_t lo = ch * kChunk, hi = std::min(trials, lo + kChunk);
    std::uint64_t err = 0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      for (std::size_t i = 0; i < m; ++i) bin[i] = gen() % N;
      double u = static_cast<double>(gen() >> 11) * 0x1.0p-53 * acc;
      std::size_t x0 = std::min<std::size_t>(
          std::upper_bound(cum.begin(), cum.end(), u) - cum.begin(), m - 1);
      best.clear();
      std::size_t top = SIZE_MAX;
      for (std::size_t i = 0; i < m; ++i) {
        if (bin[i] != bin[x0]) continue;
        if (cls[i] < top) {
          top = cls[i];
          best.assign(1, i);
        } else if (cls[i] == top) {
          best.push_back(i);
        }
      }
      std::size_t pick = best.size() == 1 ? best[0] : best[gen() % best.size()];
      if (pick != x0) ++err;
    }
    errors[ch] = err;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  if (threads <= 1) {
    for (std::uint64_t ch = 0; ch < chunks; ++ch) run_chunk(ch);
  } else {
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.push_back(std::async(std::launch::async, [&, w] {
        for (std::uint64_t ch = w; ch < chunks; ch += threads) run_chunk(ch);
      }));
    }
    for (auto& f : workers) f.get();
  }
  std::uint64_t total = 0;
  for (auto e : errors) total += e;
  BinningEstimate est;
  est.trials = trials;
  est.estimate = static_cast<double>(total) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

}  // namespace fbl

#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "fblimits/bounds.hpp"
#include "fblimits/error.hpp"
#include "fblimits/optcode.hpp"
#include "oracles.hpp"

using namespace fbl;

namespace {

const auto kB011 = FiniteDistribution::bernoulli(0.11);
const auto kParams = GaussianParams::of(kB011);

// Leaf depths of a random full binary tree with `leaves` leaves.
std::vector<int> random_prefix_lengths(std::mt19937_64& rng, std::size_t leaves) {
  std::vector<int> depth{0};
  while (depth.size() < leaves) {
    std::uniform_int_distribution<std::size_t> pick(0, depth.size() - 1);
    std::size_t i = pick(rng);
    int d = depth[i] + 1;
    depth[i] = d;
    depth.push_back(d);
  }
  std::shuffle(depth.begin(), depth.end(), rng);
  return depth;
}

}  // namespace

TEST_CASE("gaussian tail and inverse") {
  CHECK(gaussian_Q(0.0) == 0.5);
  CHECK(gaussian_Q_inv(0.5) == 0.0);
  CHECK(std::abs(gaussian_Q_inv(0.1) - 1.28155) < 1e-5);
  for (double p : {1e-12, 1e-6, 0.001, 0.02, 0.05, 0.1, 0.3, 0.49, 0.7, 0.95, 0.999999}) {
    CHECK(std::abs(gaussian_Q_inv(p) - oracle::Q_inv_bisect(p)) < 1e-8);
  }
  // Below zero Q(x) sits near 1 and its rounding alone moves x by about
  // ulp(Q(x)) / phi(x); that conditioning term is added to the 1e-10 target.
  for (double x = -6.0; x <= 6.0; x += 0.37) {
    double phi = std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
    double cond = 2 * std::numeric_limits<double>::epsilon() * gaussian_Q(x) / phi;
    CHECK(std::abs(gaussian_Q_inv(gaussian_Q(x)) - x) < 1e-10 + cond);
  }
  CHECK_THROWS_AS(gaussian_Q_inv(0.0), ValidationError);
  CHECK_THROWS_AS(gaussian_Q_inv(1.0), ValidationError);
}

TEST_CASE("spectrum quantile bound") {
  auto b2 = iid_spectrum(kB011, 2);
  double mid = std::log2(1 / 0.89) + std::log2(1 / 0.11);
  CHECK(R_upper_quantile(b2, 0.1).value == doctest::Approx(mid / 2));
  auto det = iid_spectrum(FiniteDistribution({1.0}), 3);
  CHECK(R_upper_quantile(det, 0.2).value == 0.0);
  for (int n : {1, 5, 17}) {
    auto u = iid_spectrum(FiniteDistribution::uniform(2), n);
    for (double e : {0.01, 0.5, 0.99}) CHECK(R_upper_quantile(u, e).value == doctest::Approx(1.0));
  }
}

TEST_CASE("optimized converse stays below the exact excess probability") {
  auto spec = iid_spectrum(kB011, 8);
  for (std::uint64_t k = 0; k <= 12; ++k) {
    auto b = converse_optimized(spec, k);
    CHECK(b.value >= 0.0);
    CHECK(b.value <= epsilon_star(spec, k) + 1e-15);
  }
  CHECK(converse_optimized(spec, 100).value == 0.0);
  auto big = iid_spectrum(kB011, 500);
  for (std::uint64_t k = 200; k <= 320; k += 5) {
    CHECK(converse_optimized(big, k).value <= epsilon_star(big, k) + 1e-15);
  }
}

TEST_CASE("codelength versus information converses") {
  std::mt19937_64 rng(17);
  auto d = FiniteDistribution(oracle::random_probs(rng, 16));
  std::vector<double> sorted = d.probs();
  std::vector<std::size_t> order(16);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sorted[a] > sorted[b]; });
  std::vector<int> fstar(16);
  for (std::size_t r = 0; r < 16; ++r) fstar[order[r]] = oracle::floor_log2(r + 1);
  for (double tau : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    auto c = converse_codelength_vs_info(d, fstar, tau, false);
    CHECK(c.lhs <= c.rhs);
  }
  auto vac = converse_codelength_vs_info(d, fstar, 0.0, false);
  CHECK(vac.rhs >= 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    auto lens = random_prefix_lengths(rng, 16);
    auto c = converse_codelength_vs_info(d, lens, 3.0, true);
    CHECK(c.lhs <= 0.125);
    CHECK(c.rhs == 0.125);
  }
}

TEST_CASE("normal approximation") {
  for (long n : {10L, 100L, 2000L}) {
    CHECK(approx_Rstar(kParams, n, 0.5) ==
          doctest::Approx(kParams.H - std::log2(double(n)) / (2.0 * n)).epsilon(1e-14));
  }
  CHECK(std::abs(approx_Rstar(kParams, 2000, 0.1) - 0.5242) < 1e-4);
  double prev = 1e9;
  for (long n = 100; n <= 100000; n *= 10) {
    double a = approx_Rstar(kParams, n, 0.1);
    CHECK(a < prev);
    CHECK(a > kParams.H);
    prev = a;
  }
  GaussianParams zero{1.0, 0.0, 0.0, std::nullopt};
  CHECK_THROWS_AS(approx_Rstar(zero, 10, 0.1), UnsupportedError);
}

TEST_CASE("memoryless achievability and converse") {
  for (long n : {700L, 1000L, 2000L}) {
    auto a = achievability_iid(kParams, n, 0.1);
    REQUIRE(a.valid);
    CHECK(a.value >= approx_Rstar(kParams, n, 0.1));
    auto c = converse_iid(kParams, n, 0.1);
    CHECK(c.value < approx_Rstar(kParams, n, 0.1));
  }
  GaussianParams flat = kParams;
  flat.mu3 = 0.0;
  const long n = 500;
  double expect = approx_Rstar(flat, n, 0.1) +
                  std::log2(std::numbers::log2e / std::sqrt(2 * std::numbers::pi * flat.sigma2)) / n;
  CHECK(achievability_iid(flat, n, 0.1).value == doctest::Approx(expect).epsilon(1e-14));

  auto spec = iid_spectrum(kB011, 2000);
  double exact = R_star(spec, 0.1);
  CHECK(achievability_iid(kParams, 2000, 0.1).value >= exact);
  auto conv = converse_iid(kParams, 2000, 0.1);
  double n0 = converse_iid_n0(kParams, 0.1);
  CHECK(conv.valid == (2000 > n0));
  CHECK(conv.value <= exact);
  auto small = converse_iid(kParams, 10, 0.1);
  CHECK_FALSE(small.valid);
  CHECK(std::isfinite(small.value));
  auto early = achievability_iid(kParams, 20, 0.1);
  CHECK_FALSE(early.valid);
  CHECK_THROWS_AS(converse_iid(kParams, 100, 0.5), ValidationError);
  CHECK_THROWS_AS(achievability_iid(kParams, 100, 0.6), ValidationError);
}

TEST_CASE("third-order reference expansion") {
  const double s2 = kParams.sigma2, mu3 = kParams.mu3;
  for (long n : {10L, 100L, 2000L}) {
    double v = strassen_expansion(kParams, n, 0.5).value;
    double expect = kParams.H - std::log2(2 * std::numbers::pi * s2 * n) / (2.0 * n) - mu3 / (6 * s2 * n);
    CHECK(v == doctest::Approx(expect).epsilon(1e-14));
  }
  const double q = gaussian_Q_inv(0.1);
  const double constant = -0.5 * std::log2(2 * std::numbers::pi * s2) -
                          0.5 * q * q * std::numbers::log2e + mu3 * (q * q - 1) / (6 * s2);
  for (long n = 100; n <= 100000; n *= 10) {
    double d = n * (strassen_expansion(kParams, n, 0.1).value - approx_Rstar(kParams, n, 0.1));
    CHECK(d == doctest::Approx(constant).epsilon(1e-7));
  }
  CHECK(std::abs(constant) < 2.5);
}

TEST_CASE("markov bounds") {
  auto iid = MarkovSource::iid(kB011);
  GaussianParams p = GaussianParams::of(iid, 1.3);
  CHECK(p.H == doctest::Approx(kParams.H).epsilon(1e-12));
  CHECK(p.sigma2 == doctest::Approx(kParams.sigma2).epsilon(1e-10));

  GaussianParams tiny = p;
  tiny.A_markov = 1e-12;
  CHECK(markov_achievability(tiny, 100, 0.1).value ==
        doctest::Approx(p.H + std::sqrt(p.sigma2) * gaussian_Q_inv(0.1) / 10.0).epsilon(1e-10));

  auto a = markov_achievability(p, 100, 0.1);
  const double phi = gaussian_phi(gaussian_Q_inv(0.1));
  long n0 = static_cast<long>(std::ceil(8 * 1.3 * 1.3 / (std::numbers::pi * std::numbers::e * std::pow(phi, 4))));
  CHECK(*a.n0 == doctest::Approx(8 * 1.3 * 1.3 / (std::numbers::pi * std::numbers::e * std::pow(phi, 4))));
  CHECK_FALSE(markov_achievability(p, n0 - 1, 0.1).valid);
  CHECK(markov_achievability(p, n0, 0.1).valid);

  for (long n = 10; n <= 100000; n *= 10) {
    CHECK(markov_converse(p, n, 0.1).value < markov_achievability(p, n, 0.1).value);
  }
  for (long n : {100L, 10000L, 1000000L}) CHECK_FALSE(markov_converse(p, n, 0.4999999).valid);

  GaussianParams none = p;
  none.A_markov.reset();
  CHECK_THROWS_AS(markov_achievability(none, 10, 0.1), ValidationError);
}

TEST_CASE("markov bounds bracket exact limits of an iid-kernel chain") {
  auto iid = MarkovSource::iid(kB011);
  auto cal = markov_BE_calibrate(iid, {50, 100}, 100'000, 3);
  GaussianParams p = GaussianParams::of(iid, cal.A_hat);
  for (int n : {8, 10, 12}) {
    auto spec = markov_spectrum_exact(iid, n);
    double exact = R_star(spec, 0.1);
    CHECK(markov_achievability(p, n, 0.1).value >= exact);
    CHECK(markov_converse(p, n, 0.1).value <= exact);
  }
}

TEST_CASE("Berry-Esseen calibration") {
  auto iid = MarkovSource::iid(kB011);
  auto cal = markov_BE_calibrate(iid, {50, 100, 200}, 100'000, 7);
  double envelope = kParams.mu3 / (2 * std::pow(kParams.sigma2, 1.5));
  CHECK(cal.A_hat > 0.0);
  CHECK(cal.A_hat <= envelope + cal.error_bar);
  auto again = markov_BE_calibrate(iid, {50, 100, 200}, 100'000, 7);
  CHECK(again.A_hat == cal.A_hat);
  CHECK_THROWS_AS(markov_BE_calibrate(MarkovSource::iid(FiniteDistribution::bernoulli(0.5)), {10}, 100, 1),
                  UnsupportedError);
}

TEST_CASE("sup distance to the normal law") {
  for (int n : {4, 16, 64}) {
    auto spec = iid_spectrum(kB011, n);
    double d = normal_sup_distance(spec, n * kParams.H, std::sqrt(n * kParams.sigma2));
    // Brute-force: evaluate both sides of every jump.
    double worst = 0.0, acc = 0.0;
    for (const auto& m : spec.masses()) {
      double z = (m.info - n * kParams.H) / std::sqrt(n * kParams.sigma2);
      double phi = 0.5 * std::erfc(-z / std::sqrt(2.0));
      worst = std::max(worst, std::abs(acc - phi));
      acc += m.prob;
      worst = std::max(worst, std::abs(acc - phi));
    }
    CHECK(d == doctest::Approx(worst).epsilon(1e-10));
  }
}

TEST_CASE("blocklength estimates") {
  CHECK(n_star(kParams, 1.2 * kParams.H, 0.1) == 5);
  CHECK(n_star(kParams, 1.2 * kParams.H, 0.5) == 1);
  CHECK_FALSE(n_star(kParams, kParams.H, 0.1).has_value());
  auto factory = [](int n) { return iid_spectrum(kB011, n); };
  auto scan = n_star_exact(factory, 0.55, 0.1, 4000, 50);
  REQUIRE(scan.first.has_value());
  REQUIRE(scan.confirmed.has_value());
  for (int n = 1; n < *scan.first; ++n) CHECK(R_star(factory(n), 0.1) > 0.55);
  for (int n = *scan.confirmed; n < *scan.confirmed + 50; ++n) CHECK(R_star(factory(n), 0.1) <= 0.55);
}

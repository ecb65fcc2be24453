#include "doctest.h"

#include <cmath>

#include "fblimits/error.hpp"
#include "fblimits/optcode.hpp"
#include "oracles.hpp"

using namespace fbl;

namespace {

const auto kB011 = FiniteDistribution::bernoulli(0.11);

double brute_mean_length(std::uint64_t M) {
  double s = 0.0;
  for (std::uint64_t r = 1; r <= M; ++r) s += oracle::floor_log2(r);
  return s / static_cast<double>(M);
}

double brute_var_length(std::uint64_t M) {
  double s = 0.0, s2 = 0.0;
  for (std::uint64_t r = 1; r <= M; ++r) {
    double l = oracle::floor_log2(r);
    s += l;
    s2 += l * l;
  }
  s /= static_cast<double>(M);
  return s2 / static_cast<double>(M) - s * s;
}

}  // namespace

TEST_CASE("epsilon star small cases") {
  auto u = iid_spectrum(FiniteDistribution::uniform(2), 4);
  CHECK(epsilon_star(u, 0) == 1.0);
  CHECK(epsilon_star(u, 4) == doctest::Approx(1.0 / 16).epsilon(1e-14));
  CHECK(epsilon_star(u, 5) == 0.0);
  auto b2 = iid_spectrum(kB011, 2);
  CHECK(epsilon_star(b2, 1) == doctest::Approx(0.2079).epsilon(1e-12));
  CHECK(epsilon_star(b2, 2) == doctest::Approx(0.0121).epsilon(1e-12));
  CHECK(epsilon_star(b2, 3) == 0.0);
  CHECK(max_codeword_length(b2) == 2);
}

TEST_CASE("rank cut splits a straddled mass") {
  auto b2 = iid_spectrum(kB011, 2);
  auto cut = rank_cut(b2, 2);
  CHECK(cut.mass_index == 1);
  CHECK(cut.partial_count == 1);
  CHECK(cut.partial_prob == doctest::Approx(0.0979).epsilon(1e-12));
  CHECK(cut.excluded_prob == doctest::Approx(0.0979 + 0.0121).epsilon(1e-12));
}

TEST_CASE("R star examples") {
  auto u = iid_spectrum(FiniteDistribution::uniform(2), 4);
  CHECK(R_star(u, 0.05) == doctest::Approx(5.0 / 4));
  auto b2 = iid_spectrum(kB011, 2);
  CHECK(R_star(b2, 0.1) == doctest::Approx(1.0));
  CHECK(optimal_length_threshold(b2, 0.1) == 2);
  // A single string has length 0, so P[l >= 1] = 0 already at k = 1.
  auto det = iid_spectrum(FiniteDistribution({1.0}), 5);
  CHECK(R_star(det, 0.1) == doctest::Approx(1.0 / 5));
  CHECK_THROWS_AS(R_star(b2, 1.0), ValidationError);
  CHECK_THROWS_AS(R_star(b2, -0.1), ValidationError);
}

TEST_CASE("R star is monotone in eps") {
  auto spec = iid_spectrum(kB011, 40);
  double prev = 1e9;
  for (double e = 0.001; e < 1.0; e += 0.01) {
    double r = R_star(spec, e);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("threshold rate from information levels") {
  auto b2 = iid_spectrum(kB011, 2);
  auto zero = R_star_via_viva(b2, 0.0);
  CHECK(zero.M == 0);
  CHECK(zero.length == -1);
  CHECK(zero.eps == 1.0);
  auto u = iid_spectrum(FiniteDistribution::uniform(2), 4);
  auto v = R_star_via_viva(u, 4.5);
  CHECK(v.M == 16);
  CHECK(v.rate == doctest::Approx(1.0));
  auto at4 = R_star_via_viva(u, 4.0);
  CHECK(at4.M == 0);
  auto w = R_star_via_viva(b2, 3.3513);
  CHECK(w.M == 1);
  CHECK(w.eps == doctest::Approx(0.2079).epsilon(1e-12));
  CHECK(w.rate == 0.0);
}

TEST_CASE("threshold rate sits one length unit below R star on the jump grid") {
  for (auto spec : {iid_spectrum(kB011, 6), iid_spectrum(FiniteDistribution({0.5, 0.3, 0.2}), 4)}) {
    for (std::size_t i = 0; i + 1 < spec.size(); ++i) {
      // Midpoint between consecutive info values.
      double a = 0.5 * (spec.mass(i).info + spec.mass(i + 1).info);
      auto v = R_star_via_viva(spec, a);
      CHECK(R_star(spec, v.eps) == doctest::Approx(v.rate + 1.0 / spec.n()).epsilon(1e-14));
    }
  }
}

TEST_CASE("average rate") {
  CHECK(Rbar(iid_spectrum(FiniteDistribution::uniform(7), 1)) == doctest::Approx(10.0 / 7));
  auto geo = geometric(0.5).truncate();
  CHECK(std::abs(Rbar(iid_spectrum(geo, 1)) - 0.632843) <= 1e-5);
  auto spec = iid_spectrum(kB011, 30);
  CHECK(Rbar(spec) == doctest::Approx(Rbar_from_epsilon(spec)).epsilon(1e-12));
}

TEST_CASE("integral identity") {
  CHECK(integral_identity_check(iid_spectrum(FiniteDistribution::uniform(2), 2)) < 1e-12);
  CHECK(integral_identity_check(iid_spectrum(kB011, 8)) < 1e-9);
  CHECK(integral_identity_check(iid_spectrum(FiniteDistribution({0.6, 0.3, 0.1}), 7)) < 1e-9);
  CHECK(integral_identity_check(iid_spectrum(kB011, 500)) < 1e-9);
}

TEST_CASE("equiprobable length moments") {
  CHECK(expected_length_equiprobable(1) == 0.0);
  CHECK(expected_length_equiprobable(7) == doctest::Approx(10.0 / 7).epsilon(1e-15));
  CHECK(var_length_equiprobable(1) == 0.0);
  CHECK(var_length_equiprobable(3) == doctest::Approx(2.0 / 9).epsilon(1e-15));
  for (std::uint64_t M = 1; M <= 3000; ++M) {
    CHECK(expected_length_equiprobable(M) == doctest::Approx(brute_mean_length(M)).epsilon(1e-12));
    CHECK(std::abs(var_length_equiprobable(M) - brute_var_length(M)) < 1e-9);
  }
  for (std::uint64_t m = 1; m <= 40; ++m) {
    std::uint64_t M = (std::uint64_t{1} << m) - 1;
    double closed = double(M + 1) * double(m) / double(M) - 2.0;
    CHECK(expected_length_equiprobable(M) == doctest::Approx(closed).epsilon(1e-13));
  }
  // Matches the spectrum machinery for uniform sources.
  for (std::size_t M : {3, 5, 6, 7, 9, 12}) {
    auto spec = iid_spectrum(FiniteDistribution::uniform(M), 1);
    CHECK(codelength_distribution(spec).mean == doctest::Approx(expected_length_equiprobable(M)));
    CHECK(codelength_distribution(spec).variance == doctest::Approx(var_length_equiprobable(M)));
  }
}

TEST_CASE("prefix limits") {
  auto b2 = iid_spectrum(kB011, 2);
  CHECK(prefix_epsilon(b2, 0) == 1.0);
  CHECK(prefix_epsilon(b2, 1) == 1.0);
  CHECK(prefix_epsilon(b2, 2) == doctest::Approx(0.2079).epsilon(1e-12));
  CHECK(prefix_epsilon(b2, 3) == 0.0);
  CHECK(prefix_R(b2, 0.1) == doctest::Approx(1.5));
  auto u = iid_spectrum(FiniteDistribution::uniform(2), 4);
  CHECK(prefix_R(u, 0.05) == doctest::Approx(5.0 / 4));
  CHECK(prefix_R(u, 0.1) == doctest::Approx(R_star(u, 0.1) + 0.25));
  for (int n = 1; n <= 6; ++n) {
    auto t = iid_spectrum(FiniteDistribution::uniform(3), n);
    double k = std::ceil(n * std::log2(3.0));
    CHECK(R_star(t, 1e-6) == doctest::Approx(k / n));
    CHECK(prefix_R(t, 1e-6) == doctest::Approx((k + 1) / n));
  }
}

TEST_CASE("prefix epsilon equals the Kraft search") {
  std::vector<FiniteDistribution> dists = {
      FiniteDistribution({0.7, 0.3}), FiniteDistribution({0.5, 0.3, 0.2}),
      FiniteDistribution::uniform(4), FiniteDistribution({0.4, 0.3, 0.2, 0.1}),
      FiniteDistribution({0.3, 0.25, 0.2, 0.15, 0.1})};
  for (const auto& d : dists) {
    auto spec = iid_spectrum(d, 1);
    for (std::uint64_t j = 0; j <= 5; ++j) {
      CHECK(prefix_epsilon(spec, j) ==
            doctest::Approx(oracle::prefix_epsilon_search(d.probs(), static_cast<int>(j))));
    }
  }
  auto b2 = FiniteDistribution::bernoulli(0.11);
  std::vector<double> pairs;
  for (const auto& s : oracle::iid_strings(b2, 2)) pairs.push_back(s.prob);
  auto spec = iid_spectrum(b2, 2);
  for (std::uint64_t j = 0; j <= 4; ++j) {
    CHECK(prefix_epsilon(spec, j) ==
          doctest::Approx(oracle::prefix_epsilon_search(pairs, static_cast<int>(j))));
  }
}

TEST_CASE("encode and decode") {
  auto d = FiniteDistribution::bernoulli(0.3);  // symbol 0 is the likelier
  OptimalCode code(d, 4);
  CHECK(code.encode({0, 0, 0, 0}) == "");
  CHECK(code.encode({0, 0, 0, 1}) == "0");
  CHECK(code.encode({1, 1, 1, 1}) == "0000");
  for (std::uint64_t r = 1; r <= 16; ++r) {
    auto x = code.decode(rank_to_bits(r));
    CHECK(code.rank(x) == r);
    CHECK(code.encode(x) == rank_to_bits(r));
  }
  OptimalCode u(FiniteDistribution::uniform(2), 2);
  CHECK(u.encode({0, 0}) == "");
  CHECK(u.encode({0, 1}) == "0");
  CHECK(u.encode({1, 0}) == "1");
  CHECK(u.encode({1, 1}) == "00");
  OptimalCode one(FiniteDistribution({1.0}), 3);
  CHECK(one.encode({0, 0, 0}) == "");
  CHECK_THROWS_AS(u.decode("000"), ValidationError);
  CHECK_THROWS_AS(OptimalCode(FiniteDistribution::uniform(3), 20, 1000), BudgetError);
}

TEST_CASE("code lengths of the encoder match the spectrum") {
  auto d = FiniteDistribution({0.5, 0.3, 0.2});
  const int n = 5;
  OptimalCode code(d, n);
  double mean = 0.0;
  for (const auto& s : oracle::iid_strings(d, n)) {
    std::vector<std::int64_t> x(s.x.begin(), s.x.end());
    mean += s.prob * static_cast<double>(code.encode(x).size());
  }
  CHECK(mean == doctest::Approx(codelength_distribution(iid_spectrum(d, n)).mean).epsilon(1e-12));
}

TEST_CASE("rank bit strings") {
  CHECK(rank_to_bits(1) == "");
  CHECK(rank_to_bits(2) == "0");
  CHECK(rank_to_bits(3) == "1");
  CHECK(rank_to_bits(4) == "00");
  for (std::uint64_t r = 1; r < 5000; ++r) CHECK(bits_to_rank(rank_to_bits(r)) == r);
  CHECK_THROWS_AS(bits_to_rank("01x"), ValidationError);
}

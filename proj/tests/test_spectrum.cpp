#include "doctest.h"

#include <cmath>
#include <map>

#include "fblimits/error.hpp"
#include "fblimits/spectrum.hpp"
#include "oracles.hpp"

using namespace fbl;

namespace {

const auto kB011 = FiniteDistribution::bernoulli(0.11);

// Distinct info values of the brute-force enumeration with their
// multiplicities, keyed by rounded info.
std::map<long long, std::pair<double, long>> brute_masses(const std::vector<oracle::Str>& v) {
  std::map<long long, std::pair<double, long>> m;
  for (const auto& s : v) {
    auto& e = m[std::llround(s.info * 1e9)];
    e.first += s.prob;
    e.second += 1;
  }
  return m;
}

void check_against_brute(const InformationSpectrum& spec,
                         const std::vector<oracle::Str>& strings) {
  auto bm = brute_masses(strings);
  REQUIRE(spec.size() == bm.size());
  std::size_t i = 0;
  for (const auto& [key, e] : bm) {
    const auto& m = spec.mass(i++);
    CHECK(std::llround(m.info * 1e9) == key);
    CHECK(std::abs(m.prob - e.first) <= 1e-12);
    CHECK(m.count == e.second);
  }
}

}  // namespace

TEST_CASE("big count helpers") {
  BigCount x = pow2(200);
  CHECK(log2_big(x) == 200.0);
  CHECK(bit_length(x) == 201);
  CHECK(ceil_log2(x) == 200);
  CHECK(ceil_log2(x + 1) == 201);
  CHECK(is_power_of_two(x));
  CHECK_FALSE(is_power_of_two(x + 1));
  CHECK(bit_length(BigCount(0)) == 0);
  CHECK(std::isinf(log2_big(BigCount(0))));
  CHECK(to_decimal(BigCount(12345)) == "12345");
  CHECK(scaled_to_double(pow2(3000) * 3, 3000.0) == doctest::Approx(3.0));
}

TEST_CASE("iid spectrum small cases") {
  auto fair = iid_spectrum(FiniteDistribution::bernoulli(0.5), 4);
  REQUIRE(fair.size() == 1);
  CHECK(fair.mass(0).info == doctest::Approx(4.0));
  CHECK(fair.mass(0).prob == doctest::Approx(1.0));
  CHECK(fair.mass(0).count == 16);

  auto u4 = iid_spectrum(FiniteDistribution::uniform(4), 3);
  REQUIRE(u4.size() == 1);
  CHECK(u4.mass(0).info == doctest::Approx(6.0));
  CHECK(u4.mass(0).count == 64);

  auto b2 = iid_spectrum(kB011, 2);
  REQUIRE(b2.size() == 3);
  CHECK(b2.mass(0).prob == doctest::Approx(0.7921).epsilon(1e-12));
  CHECK(b2.mass(1).prob == doctest::Approx(0.1958).epsilon(1e-12));
  CHECK(b2.mass(2).prob == doctest::Approx(0.0121).epsilon(1e-12));
  CHECK(b2.mass(1).count == 2);
  CHECK(b2.mass(0).info == doctest::Approx(2 * std::log2(1 / 0.89)).epsilon(1e-14));
}

TEST_CASE("iid spectrum matches enumeration on random sources") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t k = 2 + trial % 3;
    FiniteDistribution d(oracle::random_probs(rng, k));
    int n = 1 + trial % 6;
    check_against_brute(iid_spectrum(d, n), oracle::iid_strings(d, n));
  }
}

TEST_CASE("spectrum moments and sums") {
  auto spec = iid_spectrum(kB011, 50);
  CHECK(spec.tail_prob(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spec.head_prob(spec.size()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(spec.mean() == doctest::Approx(50 * entropy(kB011)).epsilon(1e-12));
  CHECK(spec.variance() == doctest::Approx(50 * varentropy(kB011)).epsilon(1e-10));
  CHECK(spec.total_count() == pow2(50));
  for (std::size_t i = 1; i < spec.size(); ++i) {
    CHECK(spec.mass(i).info > spec.mass(i - 1).info);
  }
}

TEST_CASE("type-class budget") {
  SpectrumBudget tiny;
  tiny.max_type_classes = 10;
  CHECK_THROWS_AS(iid_spectrum(FiniteDistribution::uniform(3), 10, tiny), BudgetError);
  CHECK_THROWS_AS(iid_spectrum(kB011, 0), ValidationError);
}

TEST_CASE("large n keeps exact counts") {
  auto spec = iid_spectrum(kB011, 2000);
  CHECK(spec.size() == 2001);
  CHECK(spec.total_count() == pow2(2000));
  CHECK(spec.tail_prob(0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("markov spectrum") {
  auto q = FiniteDistribution({0.2, 0.5, 0.3});
  auto a = markov_spectrum_exact(MarkovSource::iid(q), 3);
  auto b = iid_spectrum(q, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.mass(i).info == doctest::Approx(b.mass(i).info).epsilon(1e-12));
    CHECK(a.mass(i).count == b.mass(i).count);
  }

  MarkovSource cycle(3, 1, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  auto c = markov_spectrum_exact(cycle, 7);
  REQUIRE(c.size() == 1);
  CHECK(c.mass(0).info == doctest::Approx(std::log2(3.0)));
  CHECK(c.mass(0).count == 3);

  MarkovSource m(2, 1, {{0.9, 0.1}, {0.2, 0.8}});
  auto s2 = markov_spectrum_exact(m, 2);
  // pi = (2/3, 1/3): strings 00, 01, 10, 11. 01 and 10 both have
  // probability 1/15, so they share a mass of total weight 2/15.
  REQUIRE(s2.size() == 3);
  std::vector<double> hand = {0.6, 0.8 / 3, 2.0 / 15};
  std::vector<int> counts = {1, 1, 2};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s2.mass(i).prob == doctest::Approx(hand[i]).epsilon(1e-12));
    CHECK(s2.mass(i).count == counts[i]);
  }

  for (int n = 1; n <= 10; ++n) check_against_brute(markov_spectrum_exact(m, n), oracle::markov_strings(m, n));

  SpectrumBudget tiny;
  tiny.max_enumeration = 100;
  CHECK_THROWS_AS(markov_spectrum_exact(m, 7, tiny), BudgetError);
}

TEST_CASE("monte-carlo spectrum") {
  MarkovSource cycle(2, 1, {{0, 1}, {1, 0}}, {1.0, 0.0});
  auto det = markov_spectrum_mc(cycle, 20, 1000, 5);
  CHECK(det.size() == 1);
  CHECK_FALSE(det.is_exact());
  CHECK_THROWS_AS(det.total_count(), UnsupportedError);

  auto iid = MarkovSource::iid(kB011);
  const int n = 100;
  const std::uint64_t samples = 1'000'000;
  auto v = markov_information_samples(iid, n, samples, 42);
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(samples) * n;
  double sigma = std::sqrt(varentropy(kB011));
  CHECK(std::abs(mean - entropy(kB011)) <= 3 * sigma / std::sqrt(double(samples) * n));

  auto a = markov_information_samples(iid, 30, 50'000, 9, 1);
  auto b = markov_information_samples(iid, 30, 50'000, 9, 4);
  CHECK(a == b);
  auto s1 = markov_spectrum_mc(iid, 30, 50'000, 9);
  auto s2 = markov_spectrum_mc(iid, 30, 50'000, 9);
  REQUIRE(s1.size() == s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1.mass(i).info == s2.mass(i).info);
    CHECK(s1.mass(i).prob == s2.mass(i).prob);
  }
}

TEST_CASE("ccdf cdf quantile") {
  auto b2 = iid_spectrum(kB011, 2);
  CHECK(ccdf(b2, 0.0) == 1.0);
  CHECK(ccdf(b2, 100.0) == 0.0);
  CHECK(ccdf(b2, 1.0) == doctest::Approx(0.2079).epsilon(1e-12));
  CHECK(cdf(b2, 1.0) == doctest::Approx(0.7921).epsilon(1e-12));
  CHECK(quantile(b2, 0.9) == doctest::Approx(std::log2(1 / 0.89) + std::log2(1 / 0.11)));
  CHECK(quantile(b2, 1.0) == b2.max_info());
  CHECK_THROWS_AS(quantile(b2, 0.0), ValidationError);
  auto single = iid_spectrum(FiniteDistribution::uniform(4), 2);
  for (double p : {1e-9, 0.3, 1.0}) CHECK(quantile(single, p) == single.mass(0).info);
}

TEST_CASE("mass counts") {
  auto u8 = iid_spectrum(FiniteDistribution::uniform(8), 1);
  CHECK(count_M(u8, 1.0) == 0);
  CHECK(count_M(u8, 16.0) == 8);
  CHECK(count_M(u8, 8.0) == 0);
  CHECK(count_M_plus(u8, 8.0) == 8);
  CHECK(count_M_plus(u8, 7.9) == 0);
  auto b2 = iid_spectrum(kB011, 2);
  CHECK(count_M(b2, 1 / 0.05) == 3);
  CHECK(count_M_plus(b2, 1 / (0.11 * 0.89)) == 3);
  CHECK(count_M_plus(b2, 1.0) == 0);
  // Beyond double range.
  auto big = iid_spectrum(FiniteDistribution::bernoulli(0.5), 3000);
  CHECK(count_M_plus_log2(big, 3000.0) == pow2(3000));
  CHECK(count_M_log2(big, 3000.0) == 0);
}

TEST_CASE("mass counts agree with per-mass summation") {
  auto spec = iid_spectrum(FiniteDistribution({0.5, 0.3, 0.2}), 4);
  for (double a : {1.0, 2.5, 4.0, 6.0, 8.0}) {
    double mp = count_M_plus_log2(spec, a).get_d();
    double direct = 0.0;
    for (const auto& m : spec.masses()) {
      if (m.info <= a + 1e-12) direct += m.count.get_d();
    }
    CHECK(mp == direct);
  }
}

TEST_CASE("empirical spectrum") {
  auto e = InformationSpectrum::empirical({1.0, 2.0, 2.0, 3.0}, 1);
  CHECK(e.size() == 3);
  CHECK(e.mass(1).prob == doctest::Approx(0.5));
  CHECK(e.sample_size() == 4);
  CHECK(ccdf(e, 2.0) == doctest::Approx(0.75));
}

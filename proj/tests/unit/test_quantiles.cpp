#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "qanova/quantiles.hpp"

using Catch::Approx;
using namespace qanova;

namespace {

std::vector<double> iota_values(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 1.0);
  return v;
}

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> norm(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = norm(gen);
  return v;
}

}  // namespace

TEST_CASE("Sample validates its contents") {
  CHECK_THROWS_AS(Sample({}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({1.0, std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({1.0, INFINITY}), std::invalid_argument);
  const Sample s({3.0, 1.0, 2.0});
  CHECK(s.values()[0] == 3.0);
  CHECK(s.sorted() == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("QuantileLevel rejects the closed endpoints") {
  CHECK_THROWS_AS(QuantileLevel(0.0), std::invalid_argument);
  CHECK_THROWS_AS(QuantileLevel(1.0), std::invalid_argument);
  CHECK_THROWS_AS(QuantileLevel(-0.2), std::invalid_argument);
  CHECK(QuantileLevel(0.3).value() == 0.3);
}

TEST_CASE("sample median") {
  CHECK(sample_median(Sample({5.0})) == 5.0);
  CHECK(sample_median(Sample({4.0, 1.0, 3.0})) == 3.0);
  CHECK(sample_median(Sample({4.0, 1.0, 3.0, 2.0})) == 2.5);
  CHECK(sample_median(Sample({2.0, 2.0, 2.0, 7.0})) == 2.0);
}

TEST_CASE("Harrell-Davis weights: small cases") {
  const HdWeights one(1, QuantileLevel(0.3));
  REQUIRE(one.n() == 1);
  CHECK(one[0] == 1.0);

  const HdWeights ten(10, QuantileLevel(0.5));
  double sum = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(ten[i] == Approx(ten[9 - i]).margin(1e-14));
    CHECK(ten[i] > 0.0);
    sum += ten[i];
  }
  CHECK(sum == Approx(1.0).margin(1e-12));
}

TEST_CASE("Harrell-Davis weights match quadrature") {
  for (std::size_t n : {2u, 7u, 15u, 40u}) {
    for (double q : {0.1, 0.25, 0.5, 0.9}) {
      const HdWeights w(n, QuantileLevel(q));
      const auto ref = oracle::hd_weights(n, q);
      for (std::size_t i = 0; i < n; ++i) {
        CAPTURE(n, q, i);
        CHECK(w[i] == Approx(ref[i]).margin(1e-9));
      }
    }
  }
}

TEST_CASE("Harrell-Davis weights mirror under q -> 1 - q") {
  const HdWeights lo(13, QuantileLevel(0.2));
  const HdWeights hi(13, QuantileLevel(0.8));
  for (std::size_t i = 0; i < 13; ++i) CHECK(lo[i] == Approx(hi[12 - i]).margin(1e-13));
}

TEST_CASE("Harrell-Davis estimate") {
  const Sample x(iota_values(10));
  CHECK(hd_estimate(x, QuantileLevel(0.5)) == Approx(5.5).margin(1e-12));

  const auto ref = oracle::hd_weights(10, 0.25);
  double expect = 0.0;
  for (std::size_t i = 0; i < 10; ++i) expect += ref[i] * static_cast<double>(i + 1);
  CHECK(hd_estimate(x, QuantileLevel(0.25)) == Approx(expect).margin(1e-9));

  // Insertion order does not matter.
  CHECK(hd_estimate(Sample({4.0, 9.0, 1.0, 3.0}), QuantileLevel(0.4)) ==
        hd_estimate(Sample({1.0, 3.0, 4.0, 9.0}), QuantileLevel(0.4)));

  CHECK(hd_estimate(Sample({2.5, 2.5, 2.5}), QuantileLevel(0.1)) == 2.5);
  CHECK_THROWS_AS(hd_estimate(x, HdWeights(9, QuantileLevel(0.5))), std::invalid_argument);
}

TEST_CASE("Harrell-Davis estimate is monotone in q and bounded by the range") {
  const auto v = random_values(37, 3);
  const Sample x(v);
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  double prev = -INFINITY;
  for (int i = 1; i < 100; ++i) {
    const double est = hd_estimate(x, QuantileLevel(i / 100.0));
    CHECK(est >= prev);
    CHECK(est >= *mn);
    CHECK(est <= *mx);
    prev = est;
  }
}

TEST_CASE("Harrell-Davis estimate is location-scale equivariant") {
  const auto v = random_values(25, 11);
  for (double q : {0.1, 0.5, 0.75}) {
    const double base = hd_estimate(Sample(v), QuantileLevel(q));
    std::vector<double> t = v;
    for (auto& x : t) x = 3.0 * x - 7.0;
    CHECK(hd_estimate(Sample(t), QuantileLevel(q)) == Approx(3.0 * base - 7.0).margin(1e-12));
    for (auto& x : t) x = -x;
    const double mirrored = hd_estimate(Sample(t), QuantileLevel(1.0 - q));
    CHECK(mirrored == Approx(-(3.0 * base - 7.0)).margin(1e-12));
  }
}

TEST_CASE("Harrell-Davis estimate moves continuously with the data") {
  auto v = random_values(30, 5);
  const double base = hd_estimate(Sample(v), QuantileLevel(0.5));
  v[4] += 1e-9;
  CHECK(std::fabs(hd_estimate(Sample(v), QuantileLevel(0.5)) - base) <= 1e-9);
}

TEST_CASE("ideal fourths") {
  const Fourths f = ideal_fourths(Sample(iota_values(5)));
  CHECK(f.lower == Approx(5.0 / 3.0).margin(1e-14));
  CHECK(f.upper == Approx(13.0 / 3.0).margin(1e-14));

  CHECK_THROWS_AS(ideal_fourths(Sample({1.0, 2.0})), std::invalid_argument);

  for (std::size_t n = 3; n <= 40; ++n) {
    const auto v = random_values(n, static_cast<unsigned>(n));
    const Fourths got = ideal_fourths(Sample(v));
    const oracle::Fourths ref = oracle::ideal_fourths(v);
    CAPTURE(n);
    CHECK(got.lower == Approx(ref.lower).margin(1e-14));
    CHECK(got.upper == Approx(ref.upper).margin(1e-14));
    CHECK(got.lower <= sample_median(Sample(v)));
    CHECK(sample_median(Sample(v)) <= got.upper);
  }
}

TEST_CASE("ideal fourths of tied values have zero spread") {
  const Fourths f = ideal_fourths(Sample({0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.3}));
  CHECK(f.upper - f.lower == 0.0);
  std::vector<double> scratch{9.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const Fourths g = ideal_fourths_inplace(scratch);
  CHECK(g.lower == 1.0);
  CHECK(g.upper == 1.0);
}

TEST_CASE("ideal fourths in place agree with the sorted version") {
  for (std::size_t n : {3u, 4u, 11u, 12u, 13u, 100u}) {
    auto v = random_values(n, 99);
    const Fourths a = ideal_fourths(Sample(v));
    const Fourths b = ideal_fourths_inplace(v);
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
  }
}

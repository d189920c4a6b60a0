#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "fixtures.hpp"
#include "mixvote/errors.hpp"
#include "mixvote/harmonic.hpp"

using namespace mixvote;

TEST_CASE("integer harmonic numbers are exact") {
  CHECK(harmonic(0.0).value == 0.0);
  CHECK(harmonic(1.0).value == 1.0);
  CHECK(harmonic(2.0).value == 1.5);
  CHECK(harmonic(Rational(3)).value == doctest::Approx(11.0 / 6).epsilon(1e-15));
  CHECK(harmonic(Rational(1000)).abs_error_bound <= 1e-15);
}

TEST_CASE("harmonic matches the brute-force series") {
  for (double x : {0.001, 0.25, 0.9, 1.9, 3.5, 17.125, 99.99, 1000.5, 123456.7}) {
    CAPTURE(x);
    const HarmonicValue h = harmonic(x);
    CHECK(h.abs_error_bound <= kDefaultHarmonicTol);
    CHECK(std::abs(h.value - static_cast<double>(oracle_test::series_harmonic(x))) <= 2e-12);
  }
}

TEST_CASE("the example pair of harmonic values") {
  const double sum = harmonic(1.9).value + harmonic(0.9).value;
  CHECK(sum > 1.45 + 0.93);
  CHECK(sum == doctest::Approx(2.3931154416).epsilon(1e-10));
}

TEST_CASE("harmonic properties on random points") {
  SplitMix64 rng(2024);
  const double tol = 1e-12;
  for (int k = 0; k < 300; ++k) {
    const double x = 100 * rng.uniform();
    const double y = rng.uniform();
    CHECK(std::abs(harmonic(x + 1, tol).value - harmonic(x, tol).value - 1 / (x + 1)) <= 2 * tol);
    if (x > 0) {
      CHECK(harmonic(x + y, tol).value - harmonic(x, tol).value <= y / (x + y) + 2 * tol);
    }
    if (y > 10 * tol) CHECK(harmonic(x + y, tol).value > harmonic(x, tol).value);
  }
}

TEST_CASE("derivative") {
  const double pi2_6 = std::numbers::pi * std::numbers::pi / 6;
  CHECK(harmonic_derivative(0.0) == doctest::Approx(pi2_6).epsilon(1e-12));
  CHECK(harmonic(1e-7).value / 1e-7 == doctest::Approx(pi2_6).epsilon(1e-5));
  // H'(x) = pi^2/6 - H^(2)(x); at x = 1 that is pi^2/6 - 1.
  CHECK(harmonic_derivative(1.0) == doctest::Approx(pi2_6 - 1).epsilon(1e-12));
  double prev = harmonic_derivative(0.0);
  for (double x = 0.5; x < 50; x += 0.5) {
    const double d = harmonic_derivative(x);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(harmonic(-0.5), DomainError);
  CHECK_THROWS_AS(harmonic(1.5, 1e-20), DomainError);
  CHECK_THROWS_AS(harmonic(Rational(-1, 2)), DomainError);
}

TEST_CASE("GPAV score") {
  const Instance inst = fixtures::fig1();
  CHECK(gpav_score(inst, Bundle({}, {0, 1})).value == 2.0);
  CHECK(gpav_score(inst, Bundle{}).value == 0.0);
  const HarmonicValue s = gpav_score(inst, Bundle(inst.full_cake(), {0}));
  CHECK(s.value == doctest::Approx(harmonic(1.9).value + harmonic(0.9).value).epsilon(1e-14));
  CHECK(s.abs_error_bound <= 2 * kDefaultHarmonicTol);
}

#include <doctest.h>

#include <cmath>

#include "starkbeat/quadrature.hpp"

using namespace starkbeat;

TEST_CASE("polynomial and gaussian integrals") {
  auto q = [](auto f, double a, double b) {
    return quadrature::integrate(f, a, b, {1e-12, 0.0, 4096});
  };
  Complex p = q([](double x) { return Complex(x * x * x - 2.0 * x, 0.0); },
                -1.0, 3.0);
  CHECK(p.real() == doctest::Approx(12.0).epsilon(1e-12));  // x^4/4 - x^2

  Complex g = q([](double x) { return Complex(std::exp(-x * x), 0.0); }, -8.0,
                8.0);
  CHECK(g.real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
}

TEST_CASE("oscillatory complex integrand") {
  // int_0^20 exp(i 7 x) dx = (exp(140 i) - 1)/(7 i)
  Complex got = quadrature::integrate(
      [](double x) { return std::exp(Complex(0.0, 7.0 * x)); }, 0.0, 20.0,
      {1e-12, 0.0, 4096});
  Complex want = (std::exp(Complex(0.0, 140.0)) - 1.0) / Complex(0.0, 7.0);
  CHECK(std::abs(got - want) < 1e-11);
}

TEST_CASE("panel budget exhaustion is reported") {
  // kink at an irrational point keeps bisection from ever resolving it
  // within a 4-panel budget
  auto f = [](double x) {
    return Complex(std::sqrt(std::fabs(x - 0.3183098861837907)), 0.0);
  };
  CHECK_THROWS_AS(
      (void)quadrature::integrate(f, 0.0, 1.0, {1e-14, 0.0, 4}), Error);
}

TEST_CASE("bad interval is rejected") {
  CHECK_THROWS_AS((void)quadrature::integrate(
                      [](double) { return Complex{}; }, 1.0, 1.0, {}),
                  Error);
}

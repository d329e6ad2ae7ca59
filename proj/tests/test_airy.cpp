#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "reference_data.hpp"
#include "starkbeat/airy.hpp"

using namespace starkbeat;
using airy::Sign;

namespace {

double rel_err(Complex got, Complex want) {
  double scale = std::abs(want);
  if (scale == 0.0) return std::abs(got);
  return std::abs(got - want) / scale;
}

Complex ref_c(double re, double im) { return {re, im}; }

}  // namespace

TEST_CASE("airy matches the high-precision grid to 1e-12 relative") {
  double worst = 0.0;
  for (const auto& r : refdata::kAiryGrid) {
    Complex z{r.zr, r.zi};
    worst = std::max(worst, rel_err(airy::ai(z), ref_c(r.ai_r, r.ai_i)));
    worst = std::max(worst, rel_err(airy::ai_prime(z), ref_c(r.aip_r, r.aip_i)));
    worst = std::max(worst, rel_err(airy::bi(z), ref_c(r.bi_r, r.bi_i)));
    worst = std::max(worst, rel_err(airy::bi_prime(z), ref_c(r.bip_r, r.bip_i)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("closed forms at the origin") {
  CHECK(rel_err(airy::ai(0.0), refdata::kAi0) < 1e-15);
  CHECK(rel_err(airy::ai_prime(0.0), refdata::kAip0) < 1e-15);
  CHECK(rel_err(airy::bi(0.0), refdata::kBi0) < 1e-15);
  CHECK(rel_err(airy::bi_prime(0.0), refdata::kBip0) < 1e-15);
  // Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3)
  CHECK(airy::ai(0.0).real() == doctest::Approx(0.3550280539).epsilon(1e-9));
  CHECK(airy::ai_prime(0.0).real() ==
        doctest::Approx(-0.2588194038).epsilon(1e-9));
  CHECK(airy::bi(0.0).real() == doctest::Approx(0.6149266274).epsilon(1e-9));
  CHECK(airy::bi_prime(0.0).real() ==
        doctest::Approx(0.4482883574).epsilon(1e-9));
}

TEST_CASE("series oracle reproduces Ai(5+2i) and Bi(-4-3i)") {
  auto v1 = oracle::airy_series({5.0L, 2.0L});
  Complex want1{static_cast<double>(v1.ai.real()),
                static_cast<double>(v1.ai.imag())};
  CHECK(rel_err(airy::ai({5.0, 2.0}), want1) < 2e-12);
  // the oracle itself agrees with the frozen arbitrary-precision value
  CHECK(rel_err(want1, ref_c(refdata::kAi_5_2_re, refdata::kAi_5_2_im)) < 1e-12);

  auto v2 = oracle::airy_series({-4.0L, -3.0L});
  Complex want2{static_cast<double>(v2.bi.real()),
                static_cast<double>(v2.bi.imag())};
  CHECK(rel_err(airy::bi({-4.0, -3.0}), want2) < 2e-12);
  CHECK(rel_err(want2, ref_c(refdata::kBi_m4_m3_re, refdata::kBi_m4_m3_im)) <
        1e-12);
}

TEST_CASE("Ci combinations") {
  SUBCASE("Ci+(0) = Bi(0) + i Ai(0)") {
    Complex got = airy::ci(0.0, Sign::plus);
    CHECK(got.real() == doctest::Approx(0.6149266274).epsilon(1e-9));
    CHECK(got.imag() == doctest::Approx(0.3550280539).epsilon(1e-9));
  }
  SUBCASE("Schwarz reflection: Ci-(z) = conj Ci+(conj z)") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-9.0, 9.0);
    for (int i = 0; i < 50; ++i) {
      Complex z{u(rng), u(rng)};
      Complex a = airy::ci(z, Sign::minus);
      Complex b = std::conj(airy::ci(std::conj(z), Sign::plus));
      CHECK(rel_err(a, b) < 1e-13);
    }
  }
  SUBCASE("Ci+(-10) matches the negative-axis asymptotic oracle") {
    Complex want = oracle::ci_plus_negative_axis(10.0);
    CHECK(rel_err(airy::ci(-10.0, Sign::plus), want) < 1e-12);
    CHECK(rel_err(airy::ci(-10.0, Sign::plus),
                  ref_c(refdata::kCip_m10_re, refdata::kCip_m10_im)) < 1e-12);
  }
  SUBCASE("Ci equals Bi + i Ai componentwise") {
    for (Complex z : {Complex{2.5, 0.3}, Complex{-6.0, 1.0}, Complex{0.2, -4.0},
                      Complex{12.0, -2.0}}) {
      Complex want = airy::bi(z) + Complex(0, 1) * airy::ai(z);
      CHECK(rel_err(airy::ci(z, Sign::plus), want) < 1e-11);
    }
  }
}

TEST_CASE("Wronskian Ai Bi' - Ai' Bi = 1/pi at 1000 random points") {
  // relative to the magnitude of the products entering the cancellation:
  // in sectors where Ai and Bi both grow like exp|Re zeta| the two terms
  // reach ~1e52 at |z| = 20 and the identity can only hold to machine
  // precision of that scale
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> radius(0.0, 20.0);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Complex z = std::polar(radius(rng), angle(rng));
    Complex t1 = airy::ai(z) * airy::bi_prime(z);
    Complex t2 = airy::ai_prime(z) * airy::bi(z);
    double scale = std::max({1.0 / M_PI, std::abs(t1), std::abs(t2)});
    worst = std::max(worst, std::abs(t1 - t2 - 1.0 / M_PI) / scale);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("connection formula Ai(z) + w Ai(wz) + w^2 Ai(w^2 z) = 0") {
  const Complex w{-0.5, std::sqrt(3.0) / 2.0};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> radius(0.0, 10.0);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int i = 0; i < 200; ++i) {
    Complex z = std::polar(radius(rng), angle(rng));
    Complex sum = airy::ai(z) + w * airy::ai(w * z) + w * w * airy::ai(w * w * z);
    // absolute tolerance scaled by the largest of the three terms
    double scale = std::max({std::abs(airy::ai(z)), std::abs(airy::ai(w * z)),
                             std::abs(airy::ai(w * w * z)), 1e-3});
    CHECK(std::abs(sum) / scale < 1e-10);
  }
}

TEST_CASE("Schwarz symmetry of Ai and Bi") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-12.0, 12.0);
  for (int i = 0; i < 100; ++i) {
    Complex z{u(rng), u(rng)};
    CHECK(rel_err(airy::ai(std::conj(z)), std::conj(airy::ai(z))) < 1e-13);
    CHECK(rel_err(airy::bi(std::conj(z)), std::conj(airy::bi(z))) < 1e-13);
  }
}

TEST_CASE("differential equation residual vanishes under step refinement") {
  // second differences of Ai about z0 approximate Ai'' = z Ai with O(h^2)
  Complex z0{1.7, -0.9};
  double prev = 1e300;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    Complex second =
        (airy::ai(z0 + h) - 2.0 * airy::ai(z0) + airy::ai(z0 - h)) / (h * h);
    double resid = std::abs(second - z0 * airy::ai(z0));
    CHECK(resid < prev);
    prev = resid;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("overflow guard and scaled evaluation") {
  // Bi on the positive axis overflows double far out; the scaled form stays
  // finite and carries the exponent separately
  CHECK_THROWS_AS((void)airy::bi(400.0), Error);
  CHECK_THROWS_AS((void)airy::ci(400.0, Sign::plus), Error);
  try {
    (void)airy::bi(400.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::airy_overflow);
  }
  airy::Scaled s = airy::ci_scaled(400.0, Sign::plus);
  CHECK(std::isfinite(s.value.real()));
  CHECK(s.log_scale > 5000.0);

  // recessive side underflows to zero without error
  CHECK(std::abs(airy::ai(400.0)) == 0.0);

  // non-finite input is rejected
  CHECK_THROWS_AS((void)airy::ai(Complex(std::nan(""), 0.0)), Error);
}

TEST_CASE("scaled and plain evaluations agree in the overlap") {
  for (Complex z : {Complex{9.0, 3.0}, Complex{-11.0, 0.5}, Complex{20.0, -8.0},
                    Complex{4.0, 4.0}}) {
    airy::Scaled s = airy::ai_scaled(z);
    CHECK(rel_err(s.unscaled(), airy::ai(z)) < 1e-14);
    airy::Scaled c = airy::ci_scaled(z, Sign::minus);
    CHECK(rel_err(c.unscaled(), airy::ci(z, Sign::minus)) < 1e-14);
  }
}

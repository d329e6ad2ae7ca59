#include "oracles.hpp"

#include <cmath>

#include "starkbeat/quadrature.hpp"

namespace oracle {

AiryValues airy_series(std::complex<long double> z, int terms) {
  using C = std::complex<long double>;
  // w'' = z w; coefficient recurrences c_{n+3} = c_n / ((n+3)(n+2)) for the
  // two solutions f (f(0)=1, f'(0)=0) and g (g(0)=0, g'(0)=1)
  C z3 = z * z * z;
  C f{1.0L}, fp{0.0L}, g = z, gp{1.0L};
  C tf{1.0L};            // a_k z^{3k}
  C tg = z;              // b_k z^{3k+1}
  for (int k = 1; k <= terms; ++k) {
    long double k3 = 3.0L * k;
    tf *= z3 / (k3 * (k3 - 1.0L));
    tg *= z3 / ((k3 + 1.0L) * k3);
    f += tf;
    g += tg;
    fp += tf * (k3 / z);       // d/dz a_k z^{3k}
    gp += tg * ((k3 + 1.0L) / z);
  }
  const long double c1 = 0.35502805388781723926L;  // Ai(0)
  const long double c2 = 0.25881940379280679841L;  // -Ai'(0)
  const long double s3 = 1.73205080756887729353L;
  AiryValues v;
  v.ai = c1 * f - c2 * g;
  v.aip = c1 * fp - c2 * gp;
  v.bi = s3 * (c1 * f + c2 * g);
  v.bip = s3 * (c1 * fp + c2 * gp);
  return v;
}

std::complex<double> ci_plus_negative_axis(double x) {
  // Ai(-x), Bi(-x) ~ trig(zeta - pi/4) combinations of the u_k series
  double zeta = 2.0 / 3.0 * std::pow(x, 1.5);
  constexpr int kPairs = 12;
  double u[2 * kPairs + 2];
  u[0] = 1.0;
  for (int k = 1; k <= 2 * kPairs + 1; ++k)
    u[k] = u[k - 1] * ((6.0 * k - 5.0) * (6.0 * k - 1.0)) / (72.0 * k);
  double even = 0.0, odd = 0.0, sgn = 1.0;
  for (int k = 0; k < kPairs; ++k) {
    even += sgn * u[2 * k] * std::pow(zeta, -2.0 * k);
    odd += sgn * u[2 * k + 1] * std::pow(zeta, -2.0 * k - 1.0);
    sgn = -sgn;
  }
  double c = std::cos(zeta - M_PI / 4.0), s = std::sin(zeta - M_PI / 4.0);
  double pref = 1.0 / (std::sqrt(M_PI) * std::pow(x, 0.25));
  double ai = pref * (c * even + s * odd);
  double bi = pref * (-s * even + c * odd);
  return {bi, ai};
}

double field_free_ground_k(double alpha1, double alpha2, double a) {
  auto h = [&](double k) {
    return std::exp(-2.0 * k * a) -
           (2.0 * k / std::fabs(alpha1) - 1.0) *
               (2.0 * k / std::fabs(alpha2) - 1.0);
  };
  // ground state sits just above |alpha1|/2; bracket and bisect
  double lo = std::fabs(alpha1) / 2.0 * (1.0 + 1e-12);
  double hi = std::fabs(alpha1) / 2.0 + 1.0;
  while (h(lo) * h(hi) > 0.0) hi += 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (h(lo) * h(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

starkbeat::Complex u0_overlap_quadrature(const starkbeat::GaussianState& state,
                                         double field, double t,
                                         double rel_tol) {
  using starkbeat::Complex;
  auto psi = [&](double x) {
    double u = (x - state.center) / (2.0 * state.sigma);
    return std::pow(2.0 * M_PI * state.sigma * state.sigma, -0.25) *
           std::exp(-u * u);
  };
  auto u0 = [&](double x, double y) {
    double phase = 0.5 * ((x - y) * (x - y) / (2.0 * t) -
                          field * field * t * t * t / 6.0 +
                          t * field * (x + y));
    return std::exp(Complex(0.0, phase)) /
           std::sqrt(Complex(0.0, 4.0 * M_PI * t));
  };
  double a = state.center - 8.0 * state.sigma;
  double b = state.center + 8.0 * state.sigma;
  starkbeat::quadrature::Options inner{rel_tol, 0.0, 4096};
  starkbeat::quadrature::Options outer{rel_tol, 0.0, 4096};
  return starkbeat::quadrature::integrate(
      [&](double x) {
        return psi(x) * starkbeat::quadrature::integrate(
                            [&](double y) { return u0(x, y) * psi(y); }, a, b,
                            inner);
      },
      a, b, outer);
}

}  // namespace oracle

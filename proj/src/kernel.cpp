#include "starkbeat/kernel.hpp"

#include <cmath>

namespace starkbeat::kernel {
namespace {

constexpr double kPoleTol = 1e-10;

// pi F^{-1/3} ci * ai with the exponents recombined at the end.
Complex combine(double f3, const airy::Scaled& ci_v, const airy::Scaled& ai_v) {
  airy::Scaled prod{ci_v.value * ai_v.value * (M_PI / f3),
                    ci_v.log_scale + ai_v.log_scale};
  return prod.unscaled();
}

struct WellData {
  double f3;                 // F^{1/3}
  Complex w1, w2;            // scaled arguments at the two wells
  airy::Scaled ai1, ai2, ci1, ci2;
};

WellData well_data(const ModelParams& p, Complex z, Sign sign) {
  p.validate();
  WellData d;
  d.f3 = std::cbrt(p.field);
  d.w1 = scaled_argument(p.x1, z, p);
  d.w2 = scaled_argument(p.x2, z, p);
  d.ai1 = airy::ai_scaled(d.w1);
  d.ai2 = airy::ai_scaled(d.w2);
  d.ci1 = airy::ci_scaled(d.w1, sign);
  d.ci2 = airy::ci_scaled(d.w2, sign);
  return d;
}

Eigen::Matrix2cd kmatrix_from(const WellData& d) {
  Eigen::Matrix2cd k;
  k(0, 0) = combine(d.f3, d.ci1, d.ai1);
  k(1, 1) = combine(d.f3, d.ci2, d.ai2);
  // x1 < x2: Ci takes the argument of the outer point, Ai the inner one.
  k(0, 1) = combine(d.f3, d.ci2, d.ai1);
  k(1, 0) = k(0, 1);
  return k;
}

Complex d_from(const ModelParams& p, const Eigen::Matrix2cd& k) {
  return (1.0 + p.alpha1 * k(0, 0)) * (1.0 + p.alpha2 * k(1, 1)) /
             (p.alpha1 * p.alpha2) -
         k(0, 1) * k(1, 0);
}

}  // namespace

Complex scaled_argument(double x, Complex z, const ModelParams& params) {
  return -(params.field * x + z) / std::pow(params.field, 2.0 / 3.0);
}

Complex k0(double x, double y, Complex z, const ModelParams& params,
           Sign sign) {
  params.validate();
  double lo = std::min(x, y), hi = std::max(x, y);
  airy::Scaled ci_v = airy::ci_scaled(scaled_argument(hi, z, params), sign);
  airy::Scaled ai_v = airy::ai_scaled(scaled_argument(lo, z, params));
  return combine(std::cbrt(params.field), ci_v, ai_v);
}

Eigen::Matrix2cd kmatrix(const ModelParams& params, Complex z, Sign sign) {
  return kmatrix_from(well_data(params, z, sign));
}

Complex d_function(const ModelParams& params, Complex z, Sign sign) {
  return d_from(params, kmatrix_from(well_data(params, z, sign)));
}

Eigen::Matrix2cd m_matrix(const ModelParams& params, Complex z, Sign sign) {
  Eigen::Matrix2cd k = kmatrix_from(well_data(params, z, sign));
  Eigen::Matrix2cd m;
  m(0, 0) = 1.0 / params.alpha2 + k(1, 1);
  m(0, 1) = -k(0, 1);
  m(1, 0) = -k(1, 0);
  m(1, 1) = 1.0 / params.alpha1 + k(0, 0);
  return m;
}

Complex full_kernel(double x, double y, const ModelParams& params, Complex z,
                    Sign sign) {
  WellData d = well_data(params, z, sign);
  Eigen::Matrix2cd k = kmatrix_from(d);
  Complex det = d_from(params, k);
  if (std::abs(det) < kPoleTol)
    throw Error(ErrorCode::kernel_pole,
                "full_kernel evaluated at a resonance (|D| < 1e-10)");

  Eigen::Matrix2cd m;
  m(0, 0) = 1.0 / params.alpha2 + k(1, 1);
  m(0, 1) = -k(0, 1);
  m(1, 0) = -k(1, 0);
  m(1, 1) = 1.0 / params.alpha1 + k(0, 0);

  Eigen::Vector2cd left, right;
  left(0) = k0(x, params.x1, z, params, sign);
  left(1) = k0(x, params.x2, z, params, sign);
  right(0) = k0(params.x1, y, z, params, sign);
  right(1) = k0(params.x2, y, z, params, sign);

  return k0(x, y, z, params, sign) - (left.transpose() * m * right)(0) / det;
}

}  // namespace starkbeat::kernel

#include "starkbeat/airy.hpp"

#include <cmath>
#include <limits>

// Evaluation strategy
// -------------------
// |z| <= kSeriesRadius: Maclaurin series of the two standard solutions
//   f(z) = 1 + z^3/6 + ...,  g(z) = z + z^4/12 + ...  of w'' = z w,
//   accumulated in double-double arithmetic. Near the positive real axis the
//   recessive combination Ai = c1 f - c2 g loses ~exp(2 Re zeta) of relative
//   accuracy to cancellation (zeta = (2/3) z^{3/2}); the ~32 significant
//   digits of double-double leave ~18 at the crossover radius.
// |z| > kSeriesRadius: Poincare expansion of Ai with principal branches,
//   applied directly for |arg z| <= 2 pi/3 and through the exact rotation
//   Ai(z) = -w Ai(w z) - w^2 Ai(w^2 z), w = exp(2 pi i/3), elsewhere. Bi and
//   Ci± are linear combinations of Ai at rotated arguments, so Ai is the only
//   primitive evaluated asymptotically.
// Everything is entire in z; both branches evaluate the same functions and
// agree to ~1e-13 on the crossover ring.

namespace starkbeat::airy {
namespace {

// ---------------------------------------------------------------- double-double

struct dd {
  double hi = 0.0, lo = 0.0;
};

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd sub(dd a, dd b) { return add(a, {-b.hi, -b.lo}); }

inline dd mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd mul(dd a, double b) {
  dd p = two_prod(a.hi, b);
  p.lo += a.lo * b;
  return quick_two_sum(p.hi, p.lo);
}

inline dd div(dd a, double b) {
  double q1 = a.hi / b;
  dd p = two_prod(q1, b);
  double r = ((a.hi - p.hi) - p.lo) + a.lo;
  return quick_two_sum(q1, r / b);
}

inline double to_double(dd a) { return a.hi + a.lo; }

struct cdd {
  dd re, im;
};

inline cdd add(cdd a, cdd b) { return {add(a.re, b.re), add(a.im, b.im)}; }

inline cdd sub(cdd a, cdd b) { return {sub(a.re, b.re), sub(a.im, b.im)}; }

inline cdd mul(cdd a, cdd b) {
  return {sub(mul(a.re, b.re), mul(a.im, b.im)),
          add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline cdd mul(cdd a, dd b) { return {mul(a.re, b), mul(a.im, b)}; }

inline cdd div(cdd a, double b) { return {div(a.re, b), div(a.im, b)}; }

inline double mag(cdd a) { return std::fabs(a.re.hi) + std::fabs(a.im.hi); }

inline Complex to_complex(cdd a) { return {to_double(a.re), to_double(a.im)}; }

// Ai(0), -Ai'(0), sqrt(3) in split form.
constexpr dd kC1{0.3550280538878172, 2.05233632436212e-17};
constexpr dd kC2{0.2588194037928068, -2.522243111610832e-17};
constexpr dd kSqrt3{1.7320508075688772, 1.0035084221806903e-16};

constexpr double kSeriesRadius = 8.3;
constexpr double kCoreArgLimit = 2.0943951023931953 + 1e-9;  // 2 pi / 3
constexpr double kInvTwoSqrtPi = 0.28209479177387814;        // 1/(2 sqrt(pi))

const Complex kOmega{-0.5, 0.8660254037844386};     // exp(+2 pi i/3)
const Complex kOmegaBar{-0.5, -0.8660254037844386}; // exp(-2 pi i/3)
const Complex kEipi6{0.8660254037844386, 0.5};      // exp(+i pi/6)
const Complex kEmipi6{0.8660254037844386, -0.5};    // exp(-i pi/6)

// ---------------------------------------------------------------- series

struct SeriesVals {
  Complex ai, aip, bi, bip;
};

SeriesVals series_eval(Complex z) {
  cdd zc{{z.real(), 0.0}, {z.imag(), 0.0}};
  cdd z3 = mul(mul(zc, zc), zc);

  cdd one{{1.0, 0.0}, {0.0, 0.0}};
  cdd tf = one;                         // f terms, a_k z^{3k}
  cdd tg = zc;                          // g terms, b_k z^{3k+1}
  cdd tfp = div(mul(zc, zc), 2.0);      // f' terms; k = 1 staged, added below
  cdd tgp = one;                        // g' terms

  cdd f = tf, g = tg, gp = tgp;
  cdd fp{};  // f' has no k = 0 term

  double peak = mag(tf) + mag(tg) + mag(tfp) + mag(tgp);
  for (int k = 1; k < 200; ++k) {
    double k3 = 3.0 * k;
    tf = div(mul(tf, z3), k3 * (k3 - 1.0));
    tg = div(mul(tg, z3), (k3 + 1.0) * k3);
    if (k >= 2) tfp = div(mul(tfp, z3), (k3 - 3.0) * (k3 - 1.0));
    tgp = div(mul(tgp, z3), (k3 - 2.0) * k3);
    f = add(f, tf);
    g = add(g, tg);
    fp = add(fp, tfp);
    gp = add(gp, tgp);
    double cur = mag(tf) + mag(tg) + mag(tfp) + mag(tgp);
    peak = std::max(peak, cur);
    if (cur < 1e-40 * peak) {
      cdd c1f = mul(f, kC1), c2g = mul(g, kC2);
      cdd c1fp = mul(fp, kC1), c2gp = mul(gp, kC2);
      SeriesVals out;
      out.ai = to_complex(sub(c1f, c2g));
      out.aip = to_complex(sub(c1fp, c2gp));
      out.bi = to_complex(mul(add(c1f, c2g), kSqrt3));
      out.bip = to_complex(mul(add(c1fp, c2gp), kSqrt3));
      return out;
    }
  }
  throw Error(ErrorCode::no_convergence, "airy series did not converge");
}

// ---------------------------------------------------------------- asymptotics

constexpr int kAsymTerms = 44;

struct AsymCoeffs {
  double u[kAsymTerms + 1];
  double v[kAsymTerms + 1];
};

AsymCoeffs make_asym_coeffs() {
  AsymCoeffs c;
  c.u[0] = c.v[0] = 1.0;
  for (int k = 1; k <= kAsymTerms; ++k) {
    c.u[k] = c.u[k - 1] * ((6.0 * k - 5.0) * (6.0 * k - 1.0)) / (72.0 * k);
    c.v[k] = c.u[k] * (6.0 * k + 1.0) / (1.0 - 6.0 * k);
  }
  return c;
}

const AsymCoeffs kAsym = make_asym_coeffs();

struct AsymPair {
  Scaled ai, aip;
};

// Poincare expansion; requires |arg z| <= 2 pi/3 and |z| >= kSeriesRadius.
AsymPair ai_asym_core(Complex z) {
  Complex sq = std::sqrt(z);
  Complex z14 = std::sqrt(sq);
  Complex zeta = (2.0 / 3.0) * z * sq;
  Complex t = 1.0 / zeta;

  Complex term{1.0, 0.0};
  Complex sa = term, sb = term;
  double prev_mag = std::numeric_limits<double>::max();
  for (int k = 1; k <= kAsymTerms; ++k) {
    term *= -t;
    double m = std::abs(term) * kAsym.u[k];
    if (m > prev_mag) break;  // optimal truncation reached
    sa += term * kAsym.u[k];
    sb += term * kAsym.v[k];
    prev_mag = m;
    if (m < 1e-18) break;
  }

  Complex phase = std::exp(Complex(0.0, -zeta.imag()));
  AsymPair out;
  out.ai = {kInvTwoSqrtPi * phase * sa / z14, -zeta.real()};
  out.aip = {-kInvTwoSqrtPi * phase * sb * z14, -zeta.real()};
  return out;
}

Scaled scaled_sum(Complex c1, const Scaled& s1, Complex c2, const Scaled& s2) {
  double s = std::max(s1.log_scale, s2.log_scale);
  return {c1 * s1.value * std::exp(s1.log_scale - s) +
              c2 * s2.value * std::exp(s2.log_scale - s),
          s};
}

// Scaled Ai and Ai' for any z with |z| > kSeriesRadius.
AsymPair ai_asym_any(Complex z) {
  if (std::fabs(std::arg(z)) <= kCoreArgLimit) return ai_asym_core(z);
  AsymPair a = ai_asym_core(z * kOmega);
  AsymPair b = ai_asym_core(z * kOmegaBar);
  AsymPair out;
  out.ai = scaled_sum(-kOmega, a.ai, -kOmegaBar, b.ai);
  out.aip = scaled_sum(-kOmegaBar, a.aip, -kOmega, b.aip);
  return out;
}

void check_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::bad_argument, "airy argument must be finite");
}

Scaled scaled_ai_at(Complex z) {
  if (std::abs(z) <= kSeriesRadius) return {series_eval(z).ai, 0.0};
  return ai_asym_any(z).ai;
}

Scaled scaled_aip_at(Complex z) {
  if (std::abs(z) <= kSeriesRadius) return {series_eval(z).aip, 0.0};
  return ai_asym_any(z).aip;
}

}  // namespace

Complex Scaled::unscaled() const {
  Complex v = value;
  double s = log_scale;
  if (v == Complex{}) return v;
  while (s > 350.0) {
    v *= std::exp(350.0);
    s -= 350.0;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::airy_overflow, "airy value out of range");
  }
  while (s < -350.0) {
    v *= std::exp(-350.0);
    s += 350.0;
    if (v == Complex{}) return v;
  }
  v *= std::exp(s);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw Error(ErrorCode::airy_overflow, "airy value out of range");
  return v;
}

Complex ai(Complex z) {
  check_finite(z);
  if (std::abs(z) <= kSeriesRadius) return series_eval(z).ai;
  return ai_asym_any(z).ai.unscaled();
}

Complex ai_prime(Complex z) {
  check_finite(z);
  if (std::abs(z) <= kSeriesRadius) return series_eval(z).aip;
  return ai_asym_any(z).aip.unscaled();
}

Complex bi(Complex z) {
  check_finite(z);
  if (std::abs(z) <= kSeriesRadius) return series_eval(z).bi;
  Scaled a = scaled_ai_at(z * kOmega);
  Scaled b = scaled_ai_at(z * kOmegaBar);
  return scaled_sum(kEipi6, a, kEmipi6, b).unscaled();
}

Complex bi_prime(Complex z) {
  check_finite(z);
  if (std::abs(z) <= kSeriesRadius) return series_eval(z).bip;
  Scaled a = scaled_aip_at(z * kOmega);
  Scaled b = scaled_aip_at(z * kOmegaBar);
  return scaled_sum(kEipi6 * kOmega, a, kEmipi6 * kOmegaBar, b).unscaled();
}

Complex ci(Complex z, Sign sign) { return ci_scaled(z, sign).unscaled(); }

Complex ci_prime(Complex z, Sign sign) {
  check_finite(z);
  Complex rot = (sign == Sign::plus) ? kOmega : kOmegaBar;
  Complex coeff = 2.0 * ((sign == Sign::plus) ? kEipi6 * kOmega
                                              : kEmipi6 * kOmegaBar);
  Scaled s = scaled_aip_at(z * rot);
  return Scaled{coeff * s.value, s.log_scale}.unscaled();
}

Scaled ai_scaled(Complex z) {
  check_finite(z);
  return scaled_ai_at(z);
}

Scaled ci_scaled(Complex z, Sign sign) {
  check_finite(z);
  Complex rot = (sign == Sign::plus) ? kOmega : kOmegaBar;
  Complex coeff = 2.0 * ((sign == Sign::plus) ? kEipi6 : kEmipi6);
  Scaled s = scaled_ai_at(z * rot);
  return {coeff * s.value, s.log_scale};
}

}  // namespace starkbeat::airy

// Independent oracles used by the test suites. Nothing here calls into the
// evaluation paths under test: the Airy oracle is a long-double Maclaurin
// series, the oscillatory oracle a real-axis asymptotic expansion, and the
// propagator overlap a direct 2D quadrature of the kernel.
#pragma once

#include <complex>

#include "starkbeat/types.hpp"

namespace oracle {

struct AiryValues {
  std::complex<long double> ai, aip, bi, bip;
};

/// Maclaurin series of Ai, Ai', Bi, Bi' accumulated in long double
/// (64-bit mantissa), summing `terms` terms of each series.
AiryValues airy_series(std::complex<long double> z, int terms = 200);

/// Ci+(-x) = Bi(-x) + i Ai(-x) for real x >~ 6 from the oscillatory
/// asymptotic expansions on the negative axis.
std::complex<double> ci_plus_negative_axis(double x);

/// Ground-state decay constant k of the field-free two-delta well:
/// exp(-2 k a) = (2k/|a1| - 1)(2k/|a2| - 1), energy E = -k^2.
double field_free_ground_k(double alpha1, double alpha2, double a);

/// <psi0| U0(t) |psi0> by direct 2D adaptive quadrature of the propagator
/// kernel exp{(i/2)[(x-y)^2/(2t) - F^2 t^3/6 + t F (x+y)]} / sqrt(4 pi i t).
starkbeat::Complex u0_overlap_quadrature(const starkbeat::GaussianState& state,
                                         double field, double t,
                                         double rel_tol = 1e-9);

}  // namespace oracle

#pragma once

#include <Eigen/Core>

#include "starkbeat/airy.hpp"
#include "starkbeat/types.hpp"

namespace starkbeat::kernel {

using airy::Sign;

// Resolvent kernels of the Stark Hamiltonians, built from the scaled Airy
// evaluations so products of exponentially large and small factors stay
// finite.
//
// Analytic continuation: every object below is assembled from entire
// functions of the spectral parameter z, so evaluating the same expressions
// at Im z < 0 *is* the analytic continuation of the +-boundary values from
// the upper half-plane. No Riemann-sheet bookkeeping is needed anywhere;
// resonances are ordinary zeros of d_function(..., Sign::plus) below the
// real axis.

/// Free-kernel argument w(x; z) = -(F x + z) / F^{2/3}.
Complex scaled_argument(double x, Complex z, const ModelParams& params);

/// Free Stark resolvent kernel
///   K0±(x, y; z) = pi F^{-1/3} Ci±(w(max(x,y))) Ai(w(min(x,y))).
Complex k0(double x, double y, Complex z, const ModelParams& params,
           Sign sign = Sign::plus);

/// The 2x2 matrix k_{j,l} = K0(x_j, x_l; z). Symmetric; evaluated with four
/// Airy calls total (Ai and Ci at the two well arguments, shared).
Eigen::Matrix2cd kmatrix(const ModelParams& params, Complex z,
                         Sign sign = Sign::plus);

/// Krein determinant
///   D±(z) = [1 + a1 k11][1 + a2 k22] / (a1 a2) - k12 k21.
/// Resonances are the zeros of D+ with Im z < 0.
Complex d_function(const ModelParams& params, Complex z,
                   Sign sign = Sign::plus);

/// M±(z) = [[1/a2 + k22, -k12], [-k21, 1/a1 + k11]]; this is the adjugate of
/// (diag(1/a1, 1/a2) + k), so M/D is its inverse.
Eigen::Matrix2cd m_matrix(const ModelParams& params, Complex z,
                          Sign sign = Sign::plus);

/// Full resolvent kernel
///   K±(x, y; z) = K0±(x, y; z) - sum_{n,m} K0±(x, x_n) M±_{n,m} K0±(x_m, y) / D±(z),
/// i.e. K0 minus the rank-two correction carrying the delta interactions
/// (the sign follows from the second resolvent identity; the correction
/// tends to -sum K0 [k]^{-1} K0 in the strong-coupling limit).
/// Throws Error(kernel_pole) when |D±(z)| < 1e-10, which signals that z is
/// numerically a resonance.
Complex full_kernel(double x, double y, const ModelParams& params, Complex z,
                    Sign sign = Sign::plus);

}  // namespace starkbeat::kernel

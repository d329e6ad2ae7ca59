#pragma once

#include <Eigen/Core>
#include <array>
#include <utility>

#include "starkbeat/solver.hpp"
#include "starkbeat/types.hpp"

namespace starkbeat::survival {

/// Overlap integrals of the free kernel at a resonance energy against the
/// initial state:
///   q_n = int K0+(x, x_n; E) conj(psi0)(x) dx,
///   p_m = int K0+(x_m, y; E) psi0(y) dy.
/// psi0 is real, so q_n = p_n (asserted to quadrature tolerance).
struct QPIntegrals {
  Complex q1, q2, p1, p2;
};

QPIntegrals qp_integrals(const ModelParams& params, Complex energy,
                         const GaussianState& state);

/// Residue-sum coefficients c_j = R_j sum_{n,m} M+_{n,m}(E_j) q_{n,j} p_{m,j}
/// for the two resonances (in the order given).
std::pair<Complex, Complex> coefficients(
    const ModelParams& params,
    const std::pair<solver::Resonance, solver::Resonance>& resonances,
    const GaussianState& state);

/// Closed form of <psi0| exp(-i t H0) |psi0> for the Gaussian state under
/// constant force (H0 = -d^2/dx^2 - F x):
///   exp(-i F^2 t^3 / 12 + i t F c - sigma^2 F^2 t^2 / 2) / sqrt(1 + i t/(2 sigma^2)).
/// free_term(state, F, 0) == 1 exactly.
Complex free_term(const GaussianState& state, double field, double t);

/// Survival amplitude A(t) = free term + c1 exp(-i t E1) + c2 exp(-i t E2),
/// with the two parts stored separately. The residue sum is the dominant
/// behaviour for large t; the series is evaluated wherever requested but
/// meaningful on t >~ 1e2.
struct SurvivalSeries {
  Eigen::ArrayXd times;
  Eigen::ArrayXcd amplitude;
  Eigen::ArrayXcd free_part;
  Eigen::ArrayXcd resonance_part;
  Complex c1{}, c2{};
  Complex e1{}, e2{};
};

SurvivalSeries amplitude(const ModelParams& params, const GaussianState& state,
                         const Eigen::ArrayXd& times);

/// 2000 log-spaced points on [1e2, 1e4].
Eigen::ArrayXd default_time_grid();
Eigen::ArrayXd time_grid(double t_min, double t_max, int points, bool log_spaced);

/// Two-level interference envelope at the crossing,
///   exp(-t |Im E1|) |c1 + c2 exp(-i w t)|,  w = Re E2 - Re E1.
double beat_envelope(const std::pair<solver::Resonance, solver::Resonance>& resonances,
                     const std::pair<Complex, Complex>& coeff, double t);

/// Beating contrast (max s - min s)/mean s of the envelope-normalized signal
/// s(t) = |A(t)| exp(+r t), r the least-squares decay rate of log|A| over the
/// window. Throws Error(window_too_short) when the window spans fewer than
/// two pseudo-periods (when the period is estimable from the series).
double oscillation_metric(const SurvivalSeries& series,
                          std::pair<double, double> window);

}  // namespace starkbeat::survival

#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "starkbeat/types.hpp"

namespace starkbeat::solver {

/// A converged lower-half-plane zero of D+ together with the residue of
/// 1/D+ at the pole (simple pole, residue = 1/D+'(E)).
struct Resonance {
  Complex energy{};
  Complex residue{};
  int label = 0;  // 1 or 2, branch identity
};

struct SolveOptions {
  int max_iterations = 100;
  double step_tol = 1e-12;        // relative Newton-step convergence
  double imag_offset = 1e-3;      // seed offset below the real axis
  double upper_imag_tol = 1e-11;  // noise band for the Im < 0 check
};

/// Seeds from the single-well asymptotics:
/// (-alpha1^2/4 - i d, -alpha2^2/4 - F a - i d).
std::pair<Complex, Complex> initial_guesses(const ModelParams& params,
                                            double imag_offset = 1e-3);

/// Newton iteration on D+ (derivative by central differences, Muller
/// fallback) from the given seed. Throws Error(no_convergence),
/// Error(upper_half_plane) or Error(degenerate_root).
Resonance find_resonance(const ModelParams& params, Complex seed,
                         const SolveOptions& opt = {});

/// Both resonances: the second search deflates the first root by dividing
/// D+ by (z - E1). Labels are assigned by proximity to the two seeds.
/// Throws Error(coincident_roots) if |E1 - E2| < 1e-8.
std::pair<Resonance, Resonance> find_pair(const ModelParams& params,
                                          const SolveOptions& opt = {});
std::pair<Resonance, Resonance> find_pair(const ModelParams& params,
                                          Complex seed1, Complex seed2,
                                          const SolveOptions& opt = {});

/// Axis-aligned rectangle in the complex plane.
struct Box {
  Complex lo, hi;  // lower-left and upper-right corners
};

/// Number of zeros of D+ inside the rectangle by the argument principle
/// (adaptive phase marching along the boundary). Retries with a jittered box
/// when the contour passes too close to a zero; throws
/// Error(contour_through_zero) after the retry budget.
int count_zeros(const ModelParams& params, const Box& box);

/// Branch data over an F-grid.
struct BranchTrack {
  Eigen::ArrayXd f_grid;
  Eigen::ArrayXcd first;    // E1(F)
  Eigen::ArrayXcd second;   // E2(F)
  std::vector<int> continuity_gaps;  // grid indices where tracking jumped
  std::vector<int> failures;         // grid indices where the solve failed
};

/// Track both branches along a strictly increasing F-grid, seeding each
/// point from the previous one and propagating labels by nearest
/// continuation. Per-point failures are recorded (energies set to NaN) and
/// tracking continues from the last good roots.
BranchTrack track_branches(const ModelParams& base,
                           const Eigen::ArrayXd& f_grid,
                           const SolveOptions& opt = {});

}  // namespace starkbeat::solver

#include "starkbeat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "starkbeat/kernel.hpp"

namespace starkbeat::solver {
namespace {

using DFun = std::function<Complex(Complex)>;

Complex central_derivative(const DFun& f, Complex z) {
  double h = 1e-7 * std::max(1.0, std::abs(z));
  return (f(z + h) - f(z - h)) / (2.0 * h);
}

// One Muller step from three iterates (divided differences).
Complex muller_step(const DFun& f, Complex z2, Complex z1, Complex z0,
                    Complex f0) {
  Complex f2 = f(z2), f1 = f(z1);
  Complex d01 = (f0 - f1) / (z0 - z1);
  Complex d12 = (f1 - f2) / (z1 - z2);
  Complex d012 = (d01 - d12) / (z0 - z2);
  Complex w = d01 + (z0 - z1) * d012;
  Complex disc = std::sqrt(w * w - 4.0 * f0 * d012);
  Complex den = (std::abs(w + disc) > std::abs(w - disc)) ? w + disc : w - disc;
  if (den == Complex{}) return z0 - f0 / d01;
  return z0 - 2.0 * f0 / den;
}

// Newton with a Muller fallback after stalls; returns the converged point.
// The Newton step |f/f'| is the gradient-scaled |f| convergence metric;
// when it plateaus below the loose bound we are at the double-precision
// noise floor (happens near avoided crossings where |D'| is small) and the
// iterate is accepted.
Complex solve_zero(const DFun& f, Complex seed, const SolveOptions& opt) {
  Complex z = seed;
  Complex zp1 = seed + Complex(1e-4, 0), zp2 = seed + Complex(0, 1e-4);
  double best = std::numeric_limits<double>::max();
  double prev_step = std::numeric_limits<double>::max();
  int stalls = 0;
  int plateau = 0;

  for (int it = 0; it < opt.max_iterations; ++it) {
    Complex fz = f(z);
    double mag = std::abs(fz);
    if (mag < best) {
      best = mag;
      stalls = 0;
    } else if (++stalls >= 3) {
      Complex zm = muller_step(f, zp2, zp1, z, fz);
      if (std::isfinite(zm.real()) && std::isfinite(zm.imag())) {
        zp2 = zp1;
        zp1 = z;
        z = zm;
        stalls = 0;
        continue;
      }
      stalls = 0;
    }

    Complex df = central_derivative(f, z);
    if (df == Complex{})
      throw Error(ErrorCode::degenerate_root,
                  "solver derivative vanished at iterate");
    Complex step = fz / df;
    double cap = 0.5 * std::max(1.0, std::abs(z));
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    zp2 = zp1;
    zp1 = z;
    z -= step;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorCode::no_convergence, "solver iterate left the plane");
    double scale = std::max(1.0, std::abs(z));
    double snorm = std::abs(step);
    if (snorm < opt.step_tol * scale) return z;
    if (snorm < 1e-8 * scale && snorm > 0.25 * prev_step) {
      if (++plateau >= 2) return z;  // stagnating at the noise floor
    } else {
      plateau = 0;
    }
    prev_step = snorm;
  }
  throw Error(ErrorCode::no_convergence,
              "resonance search did not converge within max_iterations");
}

Resonance finish_root(const ModelParams& params, Complex e,
                      const SolveOptions& opt) {
  DFun d = [&](Complex z) { return kernel::d_function(params, z); };
  if (e.imag() > opt.upper_imag_tol * std::max(1.0, std::abs(e)))
    throw Error(ErrorCode::upper_half_plane,
                "search converged into the upper half-plane (bad seed?)");
  Complex dp = central_derivative(d, e);
  double scale = std::max(1.0, std::abs(e));
  if (std::abs(dp) * scale < 1e-9)
    throw Error(ErrorCode::degenerate_root,
                "D' ~ 0 at converged root (near-double zero)");
  if (std::abs(d(e)) > 1e-10)
    throw Error(ErrorCode::no_convergence,
                "converged point does not satisfy the residual tolerance");
  return Resonance{e, 1.0 / dp, 0};
}

}  // namespace

std::pair<Complex, Complex> initial_guesses(const ModelParams& params,
                                            double imag_offset) {
  params.validate();
  double a = params.separation();
  return {Complex(-params.alpha1 * params.alpha1 / 4.0, -imag_offset),
          Complex(-params.alpha2 * params.alpha2 / 4.0 - params.field * a,
                  -imag_offset)};
}

Resonance find_resonance(const ModelParams& params, Complex seed,
                         const SolveOptions& opt) {
  params.validate();
  DFun d = [&](Complex z) { return kernel::d_function(params, z); };
  return finish_root(params, solve_zero(d, seed, opt), opt);
}

std::pair<Resonance, Resonance> find_pair(const ModelParams& params,
                                          Complex seed1, Complex seed2,
                                          const SolveOptions& opt) {
  params.validate();
  DFun d = [&](Complex z) { return kernel::d_function(params, z); };
  Complex e_first = solve_zero(d, seed1, opt);
  DFun deflated = [&](Complex z) { return d(z) / (z - e_first); };
  Complex e_second = solve_zero(deflated, seed2, opt);

  if (std::abs(e_first - e_second) < 1e-8)
    throw Error(ErrorCode::coincident_roots,
                "the two searches returned the same root "
                "(exact degeneracy candidate)");

  Resonance a = finish_root(params, e_first, opt);
  Resonance b = finish_root(params, e_second, opt);
  // label by proximity to the seeds
  double straight = std::abs(a.energy - seed1) + std::abs(b.energy - seed2);
  double crossed = std::abs(a.energy - seed2) + std::abs(b.energy - seed1);
  if (crossed < straight) std::swap(a, b);
  a.label = 1;
  b.label = 2;
  return {a, b};
}

std::pair<Resonance, Resonance> find_pair(const ModelParams& params,
                                          const SolveOptions& opt) {
  auto [s1, s2] = initial_guesses(params, opt.imag_offset);
  return find_pair(params, s1, s2, opt);
}

namespace {

// Accumulated phase change of D+ along the segment [za, zb], subdividing
// until each step rotates by less than pi/2. Throws through a tiny |D| so
// the caller can jitter the box.
double edge_winding(const ModelParams& params, Complex za, Complex zb,
                    Complex fa, Complex fb, int depth) {
  double dphi = std::arg(fb / fa);
  if (std::fabs(dphi) < M_PI / 2.0 && depth > 0) return dphi;
  if (depth > 48)
    throw Error(ErrorCode::contour_through_zero,
                "argument-principle contour refinement exhausted");
  Complex zm = 0.5 * (za + zb);
  Complex fm = kernel::d_function(params, zm);
  if (std::abs(fm) < 1e-13)
    throw Error(ErrorCode::contour_through_zero,
                "contour passes through a zero of D+");
  return edge_winding(params, za, zm, fa, fm, depth + 1) +
         edge_winding(params, zm, zb, fm, fb, depth + 1);
}

int count_zeros_once(const ModelParams& params, const Box& box) {
  Complex c[5] = {box.lo, Complex(box.hi.real(), box.lo.imag()), box.hi,
                  Complex(box.lo.real(), box.hi.imag()), box.lo};
  Complex f[5];
  for (int i = 0; i < 5; ++i) {
    f[i] = kernel::d_function(params, c[i]);
    if (std::abs(f[i]) < 1e-13)
      throw Error(ErrorCode::contour_through_zero,
                  "contour corner lies on a zero of D+");
  }
  double phase = 0.0;
  for (int i = 0; i < 4; ++i)
    phase += edge_winding(params, c[i], c[i + 1], f[i], f[i + 1], 0);
  double n = phase / (2.0 * M_PI);
  int count = static_cast<int>(std::lround(n));
  if (std::fabs(n - count) > 0.25)
    throw Error(ErrorCode::contour_through_zero,
                "winding number did not close to an integer");
  return count;
}

}  // namespace

int count_zeros(const ModelParams& params, const Box& box) {
  params.validate();
  if (!(box.lo.real() < box.hi.real()) || !(box.lo.imag() < box.hi.imag()))
    throw Error(ErrorCode::bad_argument, "count_zeros: degenerate rectangle");

  std::mt19937_64 rng(0x5eedu);
  std::uniform_real_distribution<double> u(0.5e-3, 2e-3);
  Box b = box;
  for (int attempt = 0; attempt < 6; ++attempt) {
    try {
      return count_zeros_once(params, b);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::contour_through_zero || attempt == 5) throw;
      double w = b.hi.real() - b.lo.real();
      double h = b.hi.imag() - b.lo.imag();
      b.lo -= Complex(u(rng) * w, u(rng) * h);
      b.hi += Complex(u(rng) * w, u(rng) * h);
    }
  }
  throw Error(ErrorCode::contour_through_zero, "count_zeros failed");
}

BranchTrack track_branches(const ModelParams& base,
                           const Eigen::ArrayXd& f_grid,
                           const SolveOptions& opt) {
  base.validate();
  if (f_grid.size() < 1)
    throw Error(ErrorCode::bad_argument, "track_branches: empty grid");
  for (int i = 0; i < f_grid.size(); ++i) {
    if (!(f_grid[i] > 0.0) || (i > 0 && !(f_grid[i] > f_grid[i - 1])))
      throw Error(ErrorCode::bad_argument,
                  "track_branches: grid must be strictly increasing and > 0");
  }

  BranchTrack track;
  track.f_grid = f_grid;
  track.first.resize(f_grid.size());
  track.second.resize(f_grid.size());
  const Complex nan{std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN()};

  ModelParams p = base;
  p.field = f_grid[0];
  auto [s1, s2] = initial_guesses(p, opt.imag_offset);
  Complex e1 = s1, e2 = s2;
  bool have_prev = false;

  for (int i = 0; i < f_grid.size(); ++i) {
    p.field = f_grid[i];
    if (!have_prev) {
      auto [g1, g2] = initial_guesses(p, opt.imag_offset);
      e1 = g1;
      e2 = g2;
    }
    try {
      auto [r1, r2] = find_pair(p, e1, e2, opt);
      Complex n1 = r1.energy, n2 = r2.energy;
      if (have_prev) {
        // nearest continuation from the previous grid point
        double straight = std::abs(n1 - e1) + std::abs(n2 - e2);
        double crossed = std::abs(n1 - e2) + std::abs(n2 - e1);
        if (crossed < straight) std::swap(n1, n2);
      }
      track.first[i] = n1;
      track.second[i] = n2;
      e1 = n1;
      e2 = n2;
      have_prev = true;
    } catch (const Error&) {
      track.failures.push_back(i);
      track.first[i] = nan;
      track.second[i] = nan;
    }
  }

  // continuity audit: flag steps far beyond the median step response
  for (const auto* branch : {&track.first, &track.second}) {
    std::vector<double> steps;
    for (int i = 1; i < f_grid.size(); ++i) {
      Complex d = (*branch)[i] - (*branch)[i - 1];
      if (std::isfinite(d.real()) && std::isfinite(d.imag()))
        steps.push_back(std::abs(d));
    }
    if (steps.size() < 3) continue;
    std::vector<double> sorted = steps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                     sorted.end());
    double median = sorted[sorted.size() / 2];
    for (int i = 1, j = 0; i < f_grid.size(); ++i) {
      Complex d = (*branch)[i] - (*branch)[i - 1];
      if (!std::isfinite(d.real()) || !std::isfinite(d.imag())) continue;
      if (steps[j++] > 50.0 * median) track.continuity_gaps.push_back(i);
    }
  }
  std::sort(track.continuity_gaps.begin(), track.continuity_gaps.end());
  track.continuity_gaps.erase(
      std::unique(track.continuity_gaps.begin(), track.continuity_gaps.end()),
      track.continuity_gaps.end());
  return track;
}

}  // namespace starkbeat::solver

#include "starkbeat/survival.hpp"

#include <cmath>
#include <limits>

#include "starkbeat/kernel.hpp"
#include "starkbeat/quadrature.hpp"

namespace starkbeat::survival {
namespace {

double psi0(const GaussianState& s, double x) {
  double u = (x - s.center) / (2.0 * s.sigma);
  return std::pow(2.0 * M_PI * s.sigma * s.sigma, -0.25) * std::exp(-u * u);
}

}  // namespace

QPIntegrals qp_integrals(const ModelParams& params, Complex energy,
                         const GaussianState& state) {
  params.validate();
  state.validate();
  double a = state.center - 8.0 * state.sigma;
  double b = state.center + 8.0 * state.sigma;
  quadrature::Options opt;
  opt.rel_tol = 1e-10;

  auto q_of = [&](double xn) {
    return quadrature::integrate(
        [&](double x) {
          return kernel::k0(x, xn, energy, params) * psi0(state, x);
        },
        a, b, opt);
  };
  auto p_of = [&](double xm) {
    return quadrature::integrate(
        [&](double y) {
          return kernel::k0(xm, y, energy, params) * psi0(state, y);
        },
        a, b, opt);
  };

  QPIntegrals out{q_of(params.x1), q_of(params.x2), p_of(params.x1),
                  p_of(params.x2)};
  // psi0 real and K0 symmetric, so q_n = p_n up to quadrature noise
  double scale = std::abs(out.q1) + std::abs(out.q2) + 1e-300;
  if (std::abs(out.q1 - out.p1) > 1e-8 * scale ||
      std::abs(out.q2 - out.p2) > 1e-8 * scale)
    throw Error(ErrorCode::quadrature_failure,
                "q/p symmetry violated beyond quadrature tolerance");
  return out;
}

std::pair<Complex, Complex> coefficients(
    const ModelParams& params,
    const std::pair<solver::Resonance, solver::Resonance>& resonances,
    const GaussianState& state) {
  auto one = [&](const solver::Resonance& r) {
    if (r.residue == Complex{})
      throw Error(ErrorCode::bad_argument,
                  "coefficients: resonance carries no residue");
    QPIntegrals qp = qp_integrals(params, r.energy, state);
    Eigen::Matrix2cd m = kernel::m_matrix(params, r.energy);
    Eigen::Vector2cd q(qp.q1, qp.q2), p(qp.p1, qp.p2);
    return r.residue * (q.transpose() * m * p)(0);
  };
  return {one(resonances.first), one(resonances.second)};
}

Complex free_term(const GaussianState& state, double field, double t) {
  state.validate();
  if (!(t >= 0.0) || !std::isfinite(t))
    throw Error(ErrorCode::bad_argument, "free_term: t must be >= 0");
  if (t == 0.0) return {1.0, 0.0};
  double s2 = state.sigma * state.sigma;
  Complex phase(-0.5 * s2 * field * field * t * t,
                -field * field * t * t * t / 12.0 + t * field * state.center);
  return std::exp(phase) / std::sqrt(Complex(1.0, t / (2.0 * s2)));
}

Eigen::ArrayXd time_grid(double t_min, double t_max, int points,
                         bool log_spaced) {
  if (!(t_min < t_max) || points < 2 || (log_spaced && !(t_min > 0.0)))
    throw Error(ErrorCode::bad_argument, "time_grid: bad range");
  if (log_spaced)
    return Eigen::ArrayXd::LinSpaced(points, std::log(t_min), std::log(t_max))
        .exp();
  return Eigen::ArrayXd::LinSpaced(points, t_min, t_max);
}

Eigen::ArrayXd default_time_grid() { return time_grid(1e2, 1e4, 2000, true); }

SurvivalSeries amplitude(const ModelParams& params, const GaussianState& state,
                         const Eigen::ArrayXd& times) {
  auto pair = solver::find_pair(params);
  auto [c1, c2] = coefficients(params, pair, state);

  SurvivalSeries s;
  s.times = times;
  s.c1 = c1;
  s.c2 = c2;
  s.e1 = pair.first.energy;
  s.e2 = pair.second.energy;
  s.amplitude.resize(times.size());
  s.free_part.resize(times.size());
  s.resonance_part.resize(times.size());
  const Complex mi(0.0, -1.0);
  for (int i = 0; i < times.size(); ++i) {
    double t = times[i];
    Complex fp = free_term(state, params.field, t);
    Complex rp = c1 * std::exp(mi * s.e1 * t) + c2 * std::exp(mi * s.e2 * t);
    s.free_part[i] = fp;
    s.resonance_part[i] = rp;
    s.amplitude[i] = fp + rp;
  }
  return s;
}

double beat_envelope(
    const std::pair<solver::Resonance, solver::Resonance>& resonances,
    const std::pair<Complex, Complex>& coeff, double t) {
  double omega =
      resonances.second.energy.real() - resonances.first.energy.real();
  double gamma = std::fabs(resonances.first.energy.imag());
  return std::exp(-t * gamma) *
         std::abs(coeff.first + coeff.second * std::exp(Complex(0, -omega * t)));
}

double oscillation_metric(const SurvivalSeries& series,
                          std::pair<double, double> window) {
  auto [lo, hi] = window;
  if (series.times.size() < 2 || lo < series.times[0] - 1e-12 ||
      hi > series.times[series.times.size() - 1] + 1e-12 || !(lo < hi))
    throw Error(ErrorCode::bad_argument,
                "oscillation_metric: window outside the series range");

  double omega = std::fabs(series.e2.real() - series.e1.real());
  if (omega > 0.0 && (hi - lo) * omega < 2.0 * 2.0 * M_PI)
    throw Error(ErrorCode::window_too_short,
                "oscillation_metric: window spans fewer than two "
                "pseudo-periods");

  // least-squares fit log|A| = a - r t over the window
  double n = 0, st = 0, stt = 0, sy = 0, sty = 0;
  for (int i = 0; i < series.times.size(); ++i) {
    double t = series.times[i];
    if (t < lo || t > hi) continue;
    double m = std::abs(series.amplitude[i]);
    if (!(m > 0.0)) continue;
    double y = std::log(m);
    n += 1;
    st += t;
    stt += t * t;
    sy += y;
    sty += t * y;
  }
  if (n < 8)
    throw Error(ErrorCode::window_too_short,
                "oscillation_metric: too few samples in the window");
  double denom = n * stt - st * st;
  double r = -(n * sty - st * sy) / denom;

  double smin = std::numeric_limits<double>::max(), smax = 0, ssum = 0,
         cnt = 0;
  for (int i = 0; i < series.times.size(); ++i) {
    double t = series.times[i];
    if (t < lo || t > hi) continue;
    double s = std::abs(series.amplitude[i]) * std::exp(r * t);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
    ssum += s;
    cnt += 1;
  }
  return (smax - smin) / (ssum / cnt);
}

}  // namespace starkbeat::survival

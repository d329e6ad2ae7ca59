#include "starkbeat/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace starkbeat::crossing {
namespace {

constexpr double kCbrt3 = 1.4422495703074083;

int sign_changes(const Eigen::ArrayXd& v) {
  int n = 0;
  double prev = 0.0;
  bool have = false;
  for (int i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) continue;
    if (have && std::signbit(v[i]) != std::signbit(prev)) ++n;
    prev = v[i];
    have = true;
  }
  return n;
}

}  // namespace

std::pair<double, double> agmon_lengths(const ModelParams& params,
                                        double energy) {
  params.validate();
  double f = params.field;
  double inner_top = -f * params.x1 - energy;  // V - E at the two wells
  double outer_top = -f * params.x2 - energy;
  if (!(outer_top > 0.0))
    throw Error(ErrorCode::no_barrier,
                "no outer barrier: energy must satisfy E < -F x2");
  double c = 2.0 / (3.0 * f);
  double rho_i = c * (std::pow(inner_top, 1.5) - std::pow(outer_top, 1.5));
  double rho_e = c * std::pow(outer_top, 1.5);
  return {rho_i, rho_e};
}

double semiclassical_fc(const ModelParams& params) {
  params.validate();
  double fc = (params.alpha1 * params.alpha1 - params.alpha2 * params.alpha2) /
              (4.0 * params.separation());
  if (!(fc > 0.0))
    throw Error(ErrorCode::nonpositive_critical_field,
                "semiclassical critical field requires |alpha1| > |alpha2|");
  return fc;
}

SemiclassicalVerdict classify_semiclassical(const ModelParams& params) {
  params.validate();
  double ratio = params.alpha1 / params.alpha2;  // both negative, ratio > 1
  SemiclassicalVerdict v;
  v.ratio = ratio;
  v.near_threshold = std::fabs(ratio - kCbrt3) / kCbrt3 < 0.02;
  v.type = (ratio < kCbrt3) ? CrossingType::type1 : CrossingType::type2;
  return v;
}

CrossingType classify_numeric(const solver::BranchTrack& track) {
  if (track.f_grid.size() < 3)
    throw Error(ErrorCode::inconclusive_classification,
                "track too short to classify");
  Eigen::ArrayXd dre = (track.first - track.second).real();
  Eigen::ArrayXd dim = (track.first - track.second).imag();
  int nre = sign_changes(dre);
  int nim = sign_changes(dim);
  if (nim >= 1 && nre == 0) return CrossingType::type1;
  if (nre >= 1 && nim == 0) return CrossingType::type2;
  throw Error(ErrorCode::inconclusive_classification,
              "no clean crossing on the grid (grid too coarse or window "
              "misses the crossing); widen or refine the sweep");
}

CrossingReport critical_field(const ModelParams& params,
                              std::pair<double, double> bracket) {
  params.validate();
  double lo = bracket.first, hi = bracket.second;
  if (!(0.0 < lo && lo < hi))
    throw Error(ErrorCode::bad_argument, "critical_field: bad bracket");

  // warm-started pair solve; seeds from the nearest previously solved field
  std::map<double, std::pair<Complex, Complex>> solved;
  auto eval = [&](double f) {
    ModelParams p = params;
    p.field = f;
    Complex s1, s2;
    if (solved.empty()) {
      auto [g1, g2] = solver::initial_guesses(p);
      s1 = g1;
      s2 = g2;
    } else {
      auto it = solved.lower_bound(f);
      if (it == solved.end() ||
          (it != solved.begin() &&
           f - std::prev(it)->first < it->first - f))
        --it;
      s1 = it->second.first;
      s2 = it->second.second;
    }
    auto [r1, r2] = solver::find_pair(p, s1, s2);
    // keep continuous branch identity across evaluations
    if (!solved.empty()) {
      auto it = solved.lower_bound(f);
      if (it == solved.end() ||
          (it != solved.begin() &&
           f - std::prev(it)->first < it->first - f))
        --it;
      Complex p1 = it->second.first, p2 = it->second.second;
      if (std::abs(r1.energy - p2) + std::abs(r2.energy - p1) <
          std::abs(r1.energy - p1) + std::abs(r2.energy - p2))
        std::swap(r1, r2);
    }
    solved[f] = {r1.energy, r2.energy};
    return std::make_tuple(r1.energy.imag() - r2.energy.imag(), r1.energy,
                           r2.energy);
  };

  auto [glo, e1lo, e2lo] = eval(lo);
  auto [ghi, e1hi, e2hi] = eval(hi);
  if (std::signbit(glo) == std::signbit(ghi))
    throw Error(ErrorCode::no_sign_change,
                "Im E1 - Im E2 does not change sign in the bracket "
                "(not a type I crossing here)");

  double fa = lo, fb = hi, ga = glo, gb = ghi;
  double fc = 0.5 * (fa + fb);
  Complex e1{}, e2{};
  for (int it = 0; it < 80; ++it) {
    double secant = fb - gb * (fb - fa) / (gb - ga);
    double width = fb - fa;
    if (!(secant > fa + 0.05 * width && secant < fb - 0.05 * width))
      secant = 0.5 * (fa + fb);
    fc = secant;
    auto [gc, e1c, e2c] = eval(fc);
    e1 = e1c;
    e2 = e2c;
    if (std::signbit(gc) == std::signbit(ga)) {
      fa = fc;
      ga = gc;
    } else {
      fb = fc;
      gb = gc;
    }
    if (std::fabs(gc) < 1e-9 || fb - fa < 1e-9) break;
  }

  CrossingReport report;
  report.crossing_type = CrossingType::type1;
  report.f_critical = fc;
  report.e1 = e1;
  report.e2 = e2;
  ModelParams at_fc = params;
  at_fc.field = fc;
  auto [ri, re] = agmon_lengths(at_fc, e1.real());
  report.rho_inner = ri;
  report.rho_outer = re;
  report.semiclassical_fc = semiclassical_fc(params);
  report.near_threshold = classify_semiclassical(params).near_threshold;
  report.method = CrossingReport::Method::numeric;
  return report;
}

}  // namespace starkbeat::crossing

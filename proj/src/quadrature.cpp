#include "starkbeat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace starkbeat::quadrature {
namespace {

constexpr double kG7x[7] = {
    -0.94910791234275849, -0.74153118559939446, -0.40584515137739718, 0.0,
    0.40584515137739718, 0.74153118559939446, 0.94910791234275849};
constexpr double kG7w[7] = {
    0.12948496616887065, 0.27970539148927659, 0.38183005050511831,
    0.41795918367346896, 0.38183005050511831, 0.27970539148927659,
    0.12948496616887065};

constexpr double kG15x[15] = {
    -0.98799251802048538, -0.93727339240070595, -0.84820658341042721,
    -0.72441773136017007, -0.57097217260853883, -0.39415134707756339,
    -0.20119409399743451, 0.0, 0.20119409399743451, 0.39415134707756339,
    0.57097217260853883, 0.72441773136017007, 0.84820658341042721,
    0.93727339240070595, 0.98799251802048538};
constexpr double kG15w[15] = {
    0.030753241996118647, 0.070366047488108069, 0.10715922046717177,
    0.13957067792615391, 0.16626920581699378, 0.18616100001556188,
    0.19843148532711125, 0.2025782419255609, 0.19843148532711125,
    0.18616100001556188, 0.16626920581699378, 0.13957067792615391,
    0.10715922046717177, 0.070366047488108069, 0.030753241996118647};

struct Panel {
  double a, b;
  Complex value;
  double error;
};

Panel make_panel(const std::function<Complex(double)>& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Complex g7{}, g15{};
  for (int i = 0; i < 7; ++i) g7 += kG7w[i] * f(mid + half * kG7x[i]);
  for (int i = 0; i < 15; ++i) g15 += kG15w[i] * f(mid + half * kG15x[i]);
  g7 *= half;
  g15 *= half;
  return {a, b, g15, std::abs(g15 - g7)};
}

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const {
    return x.error < y.error;
  }
};

}  // namespace

Complex integrate(const std::function<Complex(double)>& f, double a, double b,
                  const Options& opt) {
  if (!(a < b)) throw Error(ErrorCode::bad_argument, "integrate: need a < b");

  std::priority_queue<Panel, std::vector<Panel>, ByError> panels;
  panels.push(make_panel(f, a, b));
  Complex total = panels.top().value;
  double total_err = panels.top().error;
  int count = 1;

  while (true) {
    double goal = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= goal) break;
    if (count >= opt.max_panels)
      throw Error(ErrorCode::quadrature_failure,
                  "integrate: panel budget exhausted before tolerance");
    Panel worst = panels.top();
    panels.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b))
      throw Error(ErrorCode::quadrature_failure,
                  "integrate: interval too small to bisect");
    Panel left = make_panel(f, worst.a, mid);
    Panel right = make_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
  }
  return total;
}

}  // namespace starkbeat::quadrature

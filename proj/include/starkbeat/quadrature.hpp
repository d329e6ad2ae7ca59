#pragma once

#include <functional>

#include "starkbeat/types.hpp"

namespace starkbeat::quadrature {

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_panels = 4096;
};

/// Adaptive panel integration of a complex-valued integrand over [a, b]
/// with an embedded 7/15-point Gauss pair; the panel with the largest error
/// estimate is bisected until the summed estimate meets the tolerance.
/// Throws Error(quadrature_failure) if the panel budget is exhausted first.
Complex integrate(const std::function<Complex(double)>& f, double a, double b,
                  const Options& opt = {});

}  // namespace starkbeat::quadrature

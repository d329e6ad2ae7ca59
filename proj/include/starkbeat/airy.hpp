#pragma once

#include "starkbeat/types.hpp"

namespace starkbeat::airy {

/// Branch selector for the outgoing/incoming combinations Ci± = Bi ± i Ai.
enum class Sign { plus, minus };

/// A function value in split-exponent form, f = value * exp(log_scale).
/// |value| is kept moderate so products of exponentially large and small
/// factors can be combined without overflow.
struct Scaled {
  Complex value{};
  double log_scale = 0.0;

  /// Collapse to a plain complex; throws Error(airy_overflow) if the result
  /// would not be representable. Underflow rounds to zero.
  Complex unscaled() const;
};

// Entire-function evaluations, accurate to ~1e-12 relative for |z| <= 30.
// All of these are pure and thread-safe.
Complex ai(Complex z);
Complex ai_prime(Complex z);
Complex bi(Complex z);
Complex bi_prime(Complex z);

/// Ci±(z) = Bi(z) ± i Ai(z), evaluated in one pass through the exact
/// rotation identity Ci±(z) = 2 exp(±i pi/6) Ai(z exp(±2 pi i/3)), which
/// avoids the cancellation of Bi against i Ai in the sector where Ci± is
/// recessive.
Complex ci(Complex z, Sign sign);
Complex ci_prime(Complex z, Sign sign);

Scaled ai_scaled(Complex z);
Scaled ci_scaled(Complex z, Sign sign);

}  // namespace starkbeat::airy

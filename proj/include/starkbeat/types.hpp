#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace starkbeat {

using Complex = std::complex<double>;

enum class ErrorCode {
  bad_argument,
  airy_overflow,
  kernel_pole,
  no_convergence,
  upper_half_plane,
  degenerate_root,
  coincident_roots,
  contour_through_zero,
  no_barrier,
  nonpositive_critical_field,
  inconclusive_classification,
  no_sign_change,
  window_too_short,
  quadrature_failure,
  bad_config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// The five physical parameters of H = -d^2/dx^2 + alpha1 delta_{x1}
/// + alpha2 delta_{x2} - F x, in units hbar = 1, 2m = 1.
struct ModelParams {
  double alpha1 = -2.8;  // strength of the deeper well, alpha1 < alpha2 < 0
  double alpha2 = -2.0;
  double x1 = 0.0;       // well positions, x1 < x2
  double x2 = 5.0;
  double field = 0.17;   // DC field strength F > 0

  double separation() const { return x2 - x1; }
  void validate() const;
};

/// Normalized Gaussian wavepacket
/// psi0(x) = (2 pi sigma^2)^{-1/4} exp(-(x-center)^2 / (4 sigma^2)).
struct GaussianState {
  double center = 0.0;
  double sigma = 0.5;
  void validate() const;
};

inline void ModelParams::validate() const {
  if (!(alpha1 < alpha2) || !(alpha2 < 0.0))
    throw Error(ErrorCode::bad_argument,
                "model parameters require alpha1 < alpha2 < 0");
  if (!(x1 < x2))
    throw Error(ErrorCode::bad_argument, "model parameters require x1 < x2");
  if (!(field > 0.0))
    throw Error(ErrorCode::bad_argument, "model parameters require F > 0");
}

inline void GaussianState::validate() const {
  if (!(sigma > 0.0))
    throw Error(ErrorCode::bad_argument, "state requires sigma > 0");
}

}  // namespace starkbeat

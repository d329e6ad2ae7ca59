#pragma once

#include <utility>

#include "starkbeat/solver.hpp"
#include "starkbeat/types.hpp"

namespace starkbeat::crossing {

enum class CrossingType { type1, type2 };

/// Barrier geometry, classification verdicts and the critical field.
struct CrossingReport {
  CrossingType crossing_type = CrossingType::type1;
  double f_critical = 0.0;
  Complex e1{}, e2{};          // the two resonances at F_C
  double rho_inner = 0.0;      // Agmon length of the inner barrier
  double rho_outer = 0.0;      // Agmon length of the outer barrier
  double semiclassical_fc = 0.0;
  bool near_threshold = false;
  enum class Method { semiclassical, numeric } method = Method::numeric;
};

/// Agmon lengths of the inner barrier [x1, x2] and the outer barrier
/// [x2, -E/F] for the linear potential V = -F x off the delta supports:
///   rho_i = (2/(3F)) [(-F x1 - E)^{3/2} - (-F x2 - E)^{3/2}]
///   rho_e = (2/(3F)) (-F x2 - E)^{3/2}.
/// Requires E < -F x2 (otherwise Error(no_barrier)).
std::pair<double, double> agmon_lengths(const ModelParams& params, double energy);

/// Closed-form critical field (alpha1^2 - alpha2^2) / (4 a). Throws
/// Error(nonpositive_critical_field) unless |alpha1| > |alpha2|.
double semiclassical_fc(const ModelParams& params);

struct SemiclassicalVerdict {
  CrossingType type;
  bool near_threshold;  // within 2% of the cbrt(3) ratio threshold
  double ratio;         // alpha1 / alpha2
};

/// Type I iff |alpha1/alpha2| < 3^{1/3} (equivalently rho_i < 2 rho_e at the
/// crossing energy). The verdict is asymptotic; near the threshold the
/// near_threshold flag is set and classify_numeric should decide.
SemiclassicalVerdict classify_semiclassical(const ModelParams& params);

/// Type I iff Im E1 - Im E2 changes sign over the track while Re E1 - Re E2
/// does not; type II for the converse. Throws
/// Error(inconclusive_classification) when neither or both change sign.
CrossingType classify_numeric(const solver::BranchTrack& track);

/// Locate F_C with Im E1(F_C) = Im E2(F_C) inside the bracket by secant
/// iteration with a bisection safeguard (each evaluation is a full two-root
/// solve, warm-started from the nearest solved field value). Throws
/// Error(no_sign_change) if the bracket does not straddle a type-I crossing.
CrossingReport critical_field(const ModelParams& params,
                              std::pair<double, double> bracket);

}  // namespace starkbeat::crossing

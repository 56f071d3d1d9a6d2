#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace cooprad {

enum class Verdict { single, independent, cooperative, undetermined };

const char* verdict_name(Verdict v);

/// Emitter-count and cooperativity assessment from measured g2(0), decay
/// enhancement and (optionally) intensity enhancement.
struct CooperativityReport {
  double g2_zero = 0.0;
  double g2_zero_sigma = 0.0;
  /// Smallest N of independent emitters compatible with g2(0): the least N
  /// with 1 - 1/N >= g2(0) - sigma. INT_MAX stands in for "unbounded".
  int n_min_independent = 0;
  /// Smallest N >= 2 whose independent bound lies below g2(0) while the
  /// rate enhancement stays within N-fold cooperativity (1 < r <= N);
  /// 0 when no N qualifies.
  int n_candidate_cooperative = 0;
  /// g2(0) - (1 - 1/n_candidate); reported (finite) only when positive
  /// beyond two sigma.
  double bunching_excess = std::numeric_limits<double>::quiet_NaN();
  double rate_enhancement = 0.0;        // tau_reference / tau_measured
  double rate_enhancement_sigma = 0.0;
  double intensity_enhancement = std::numeric_limits<double>::quiet_NaN();
  Verdict verdict = Verdict::undetermined;
  /// g2(0) above the classical-bunching threshold 1 + 3 sigma.
  bool classically_bunched = false;

  std::string summary() const;
};

/// Decision rules:
///   single       g2(0) < 0.5 - 2 sigma (below every N>=2 bound)
///   cooperative  bunching_excess > 2 sigma AND
///                rate_enhancement > 1 + 2 sigma_rate
///   independent  |rate_enhancement - 1| <= 2 sigma_rate + 0.05 and g2(0)
///                within 2 sigma of 1 - 1/N for some N
///   undetermined anything else, including classically bunched input
CooperativityReport infer_emitter_number(double g2_zero, double g2_zero_sigma,
                                         double rate_enhancement,
                                         double intensity_enhancement =
                                             std::numeric_limits<double>::quiet_NaN(),
                                         double rate_enhancement_sigma = 0.0);

}  // namespace cooprad

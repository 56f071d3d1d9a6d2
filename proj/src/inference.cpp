#include "cooprad/inference.hpp"

#include <climits>
#include <cmath>
#include <cstdio>

#include "cooprad/errors.hpp"

namespace cooprad {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::single: return "single";
    case Verdict::independent: return "independent";
    case Verdict::cooperative: return "cooperative";
    case Verdict::undetermined: return "undetermined";
  }
  return "unknown";
}

CooperativityReport infer_emitter_number(double g2_zero, double g2_zero_sigma,
                                         double rate_enhancement,
                                         double intensity_enhancement,
                                         double rate_enhancement_sigma) {
  if (g2_zero < 0.0) throw ValidationError("g2(0) must be nonnegative");
  if (!(g2_zero_sigma > 0.0)) throw ValidationError("g2(0) uncertainty must be positive");
  if (rate_enhancement_sigma < 0.0)
    throw ValidationError("rate-enhancement uncertainty must be nonnegative");

  CooperativityReport r;
  r.g2_zero = g2_zero;
  r.g2_zero_sigma = g2_zero_sigma;
  r.rate_enhancement = rate_enhancement;
  r.rate_enhancement_sigma = rate_enhancement_sigma;
  r.intensity_enhancement = intensity_enhancement;
  r.classically_bunched = g2_zero > 1.0 + 3.0 * g2_zero_sigma;

  // smallest N of independent emitters with 1 - 1/N >= g2 - sigma
  const double floor_g2 = g2_zero - g2_zero_sigma;
  if (floor_g2 >= 1.0 || 1.0 / (1.0 - floor_g2) >= static_cast<double>(INT_MAX)) {
    r.n_min_independent = INT_MAX;  // no workable ensemble size reaches this g2
  } else {
    int n = std::max(1, static_cast<int>(std::ceil(1.0 / (1.0 - floor_g2) - 1e-12)));
    while (1.0 - 1.0 / n < floor_g2) ++n;  // settle fp edge cases exactly
    while (n > 1 && 1.0 - 1.0 / (n - 1) >= floor_g2) --n;
    r.n_min_independent = n;
  }

  // smallest N >= 2 whose independent bound sits below the measurement while
  // the decay speed-up stays within N-fold cooperativity
  double excess = 0.0;
  if (rate_enhancement > 1.0) {
    for (int n = 2; n <= 4096; ++n) {
      if (1.0 - 1.0 / n <= g2_zero && rate_enhancement <= n) {
        r.n_candidate_cooperative = n;
        excess = g2_zero - (1.0 - 1.0 / n);
        break;
      }
    }
  }
  if (r.n_candidate_cooperative > 0 && excess > 2.0 * g2_zero_sigma)
    r.bunching_excess = excess;

  const double rate_band = 2.0 * rate_enhancement_sigma + 0.05;
  auto matches_independent_bound = [&] {
    if (std::abs(g2_zero - 1.0) <= 2.0 * g2_zero_sigma) return true;  // large-N limit
    for (int n = 2; n <= 10000; ++n)
      if (std::abs(g2_zero - (1.0 - 1.0 / n)) <= 2.0 * g2_zero_sigma) return true;
    return false;
  };

  if (r.classically_bunched) {
    r.verdict = Verdict::undetermined;
  } else if (g2_zero < 0.5 - 2.0 * g2_zero_sigma) {
    r.verdict = Verdict::single;  // below every N >= 2 bound
  } else if (r.n_candidate_cooperative > 0 && excess > 2.0 * g2_zero_sigma &&
             rate_enhancement > 1.0 + 2.0 * rate_enhancement_sigma) {
    r.verdict = Verdict::cooperative;
  } else if (std::abs(rate_enhancement - 1.0) <= rate_band && matches_independent_bound()) {
    r.verdict = Verdict::independent;
  } else {
    r.verdict = Verdict::undetermined;
  }
  return r;
}

std::string CooperativityReport::summary() const {
  char buf[320];
  char nmin[32];
  if (n_min_independent == INT_MAX)
    std::snprintf(nmin, sizeof nmin, "unbounded");
  else
    std::snprintf(nmin, sizeof nmin, "%d", n_min_independent);
  std::snprintf(buf, sizeof buf,
                "g2(0) = %.4f +- %.4f, n_min_independent = %s, "
                "n_candidate_cooperative = %d, bunching_excess = %.4f, "
                "rate_enhancement = %.3f +- %.3f, intensity_enhancement = %.3f, "
                "verdict = %s%s",
                g2_zero, g2_zero_sigma, nmin, n_candidate_cooperative, bunching_excess,
                rate_enhancement, rate_enhancement_sigma, intensity_enhancement,
                verdict_name(verdict), classically_bunched ? " (classically bunched)" : "");
  return buf;
}

}  // namespace cooprad

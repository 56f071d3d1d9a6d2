#pragma once

#include <vector>

namespace cooprad {

/// Rate ladder for N indistinguishable emitters decaying through the
/// symmetric subspace. Step s (0-based, starting from fully excited) emits at
/// rates_per_ns[s] = gamma0 * (J+m)(J-m+1) with J = N/2 and m = J - s.
struct DickeLadder {
  int n_emitters = 0;
  std::vector<double> rates_per_ns;
};

DickeLadder dicke_ladder(int n, double gamma0_per_ns);

/// Headline enhancement figures for a ladder: the first-emission rate over
/// gamma0, and the total independent cascade time over the ladder's.
struct RateEnhancement {
  double first_emission = 0.0;
  double cascade_duration = 0.0;
};

RateEnhancement effective_rate_enhancement(const DickeLadder& ladder);

}  // namespace cooprad

#pragma once

#include <cstdint>
#include <vector>

#include "cooprad/correlator.hpp"

namespace cooprad {

/// Photon counts vs time since sync — the pulse-averaged emission intensity
/// profile. Same binning convention as LifetimeHistogram.
struct IntensityTrace {
  std::int64_t bin_width_ps = 0;
  std::vector<std::int64_t> counts;

  int n_bins() const { return static_cast<int>(counts.size()); }
  std::int64_t bin_center_ps(int k) const { return k * bin_width_ps + bin_width_ps / 2; }

  /// Height of the tallest bin, averaged over a small neighborhood to tame
  /// single-bin shot noise (half_window bins to each side).
  double peak_amplitude(int half_window = 2) const;
};

IntensityTrace intensity_trace(const LifetimeHistogram& hist);

}  // namespace cooprad

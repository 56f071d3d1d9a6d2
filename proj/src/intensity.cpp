#include "cooprad/intensity.hpp"

#include <algorithm>

#include "cooprad/errors.hpp"

namespace cooprad {

double IntensityTrace::peak_amplitude(int half_window) const {
  if (counts.empty()) throw ValidationError("intensity trace is empty");
  if (half_window < 0) throw ValidationError("half window must be nonnegative");
  double best = 0.0;
  const int n = n_bins();
  for (int k = 0; k < n; ++k) {
    const int lo = std::max(0, k - half_window);
    const int hi = std::min(n - 1, k + half_window);
    double sum = 0.0;
    for (int i = lo; i <= hi; ++i) sum += static_cast<double>(counts[i]);
    best = std::max(best, sum / (hi - lo + 1));
  }
  return best;
}

IntensityTrace intensity_trace(const LifetimeHistogram& hist) {
  IntensityTrace trace;
  trace.bin_width_ps = hist.bin_width_ps;
  trace.counts = hist.counts;
  return trace;
}

}  // namespace cooprad

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "cooprad/timetag.hpp"

namespace cooprad {

/// Pair-delay histogram between two channels, tau = t(ch_b) - t(ch_a), over
/// |tau| <= max_delay_ps. Bin k (0-based) is centered at
/// (k - n_side_bins())*bin_width_ps; the tau=0 bin sits at the middle index.
struct CorrelationHistogram {
  std::int64_t bin_width_ps = 0;
  std::int64_t max_delay_ps = 0;
  int ch_a = 1;
  int ch_b = 2;
  std::vector<std::int64_t> counts;
  std::int64_t counts_ch_a = 0;
  std::int64_t counts_ch_b = 0;

  /// Pulsed-normalization bookkeeping, filled by normalize_pulsed.
  struct Normalization {
    std::int64_t rep_period_ps = 0;
    int n_side_peaks = 0;               // per side
    double central_peak_counts = 0.0;   // integrated over one period
    double mean_side_peak_counts = 0.0;
  };
  std::optional<Normalization> normalization;

  /// Central-peak integral over the mean side-peak integral (per-pulse
  /// coincidence yield relative to uncorrelated pulses).
  double g2_zero = std::numeric_limits<double>::quiet_NaN();
  double g2_zero_sigma = std::numeric_limits<double>::quiet_NaN();

  /// tau=0 bin of g2_curve: the histogram height at zero delay relative to
  /// the side-peak average shape at the same within-period offset. Resolves
  /// waiting-time structure that the integrated ratio above averages away.
  double g2_zero_pointwise = std::numeric_limits<double>::quiet_NaN();
  double g2_zero_pointwise_sigma = std::numeric_limits<double>::quiet_NaN();

  /// Pointwise-normalized correlation curve (same length as counts); bins
  /// with an empty side-peak reference are NaN. Empty until normalized.
  std::vector<double> g2_curve;

  int n_side_bins() const { return (n_bins() - 1) / 2; }
  int n_bins() const { return static_cast<int>(counts.size()); }
  std::int64_t bin_center_ps(int k) const {
    return (static_cast<std::int64_t>(k) - n_side_bins()) * bin_width_ps;
  }
};

/// Time-since-last-sync histogram; bin k covers [k*w, (k+1)*w) ps. Detector
/// tags arriving before the first sync are skipped and counted.
struct LifetimeHistogram {
  std::int64_t bin_width_ps = 0;
  std::vector<std::int64_t> counts;
  std::int64_t sync_count = 0;
  std::int64_t skipped_tags = 0;

  int n_bins() const { return static_cast<int>(counts.size()); }
  std::int64_t bin_center_ps(int k) const { return k * bin_width_ps + bin_width_ps / 2; }
  std::int64_t total_counts() const;
};

/// Single-pass sliding-window pair count; exactly equal to the all-pairs
/// count restricted to |tau| <= max_delay_ps. A channel with no tags is an
/// insufficient-data error.
CorrelationHistogram correlate(const std::vector<TimeTagRecord>& records,
                               int ch_a, int ch_b,
                               std::int64_t bin_width_ps, std::int64_t max_delay_ps);

/// Fills the normalization block and all g2 fields using n_side_peaks
/// repetition-period windows on each side of the central peak. The histogram
/// must span at least (n_side_peaks + 1/2) periods per side.
CorrelationHistogram normalize_pulsed(const CorrelationHistogram& hist,
                                      std::int64_t rep_period_ps, int n_side_peaks);

/// Accumulates time-since-sync for every tag on the listed detector
/// channels. No sync tags at all is a validation error.
LifetimeHistogram lifetime_histogram(const std::vector<TimeTagRecord>& records,
                                     const std::vector<int>& detector_channels,
                                     std::int64_t bin_width_ps);

}  // namespace cooprad

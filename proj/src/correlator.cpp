#include "cooprad/correlator.hpp"

#include <cmath>
#include <string>

#include "cooprad/errors.hpp"

namespace cooprad {

namespace {

// floor division for signed numerator, positive denominator
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

// bin index offset from tau=0 for half-open bins [c - w/2, c + w/2)
std::int64_t bin_offset(std::int64_t tau, std::int64_t w) {
  return floor_div(2 * tau + w, 2 * w);
}

constexpr std::size_t kMaxLifetimeBins = 1 << 24;

}  // namespace

std::int64_t LifetimeHistogram::total_counts() const {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

CorrelationHistogram correlate(const std::vector<TimeTagRecord>& records, int ch_a,
                               int ch_b, std::int64_t bin_width_ps,
                               std::int64_t max_delay_ps) {
  if (bin_width_ps < 1) throw ValidationError("bin width must be at least 1 ps");
  if (max_delay_ps < 1) throw ValidationError("max delay must be at least 1 ps");
  if (ch_a < 0 || ch_a > kMaxDetectorChannel || ch_b < 0 || ch_b > kMaxDetectorChannel)
    throw ValidationError("correlation channels must be within the stream's range");

  std::vector<std::int64_t> ta, tb;
  for (const auto& r : records) {
    if (r.channel == ch_a) ta.push_back(r.timestamp_ps);
    if (r.channel == ch_b) tb.push_back(r.timestamp_ps);
  }
  if (ta.empty())
    throw InsufficientDataError("channel " + std::to_string(ch_a) + " has no tags");
  if (tb.empty())
    throw InsufficientDataError("channel " + std::to_string(ch_b) + " has no tags");

  CorrelationHistogram hist;
  hist.bin_width_ps = bin_width_ps;
  hist.max_delay_ps = max_delay_ps;
  hist.ch_a = ch_a;
  hist.ch_b = ch_b;
  hist.counts_ch_a = static_cast<std::int64_t>(ta.size());
  hist.counts_ch_b = static_cast<std::int64_t>(tb.size());
  const std::int64_t nside = (max_delay_ps + bin_width_ps - 1) / bin_width_ps;
  hist.counts.assign(static_cast<std::size_t>(2 * nside + 1), 0);

  // sliding window: for each b-tag, a-tags within +-max_delay; the lower
  // edge only ever advances, so the pass is O(total + pairs)
  const bool same = ch_a == ch_b;
  std::size_t lo = 0;
  for (std::size_t j = 0; j < tb.size(); ++j) {
    while (lo < ta.size() && ta[lo] < tb[j] - max_delay_ps) ++lo;
    for (std::size_t i = lo; i < ta.size() && ta[i] <= tb[j] + max_delay_ps; ++i) {
      if (same && i == j) continue;  // a tag is not its own pair
      const std::int64_t tau = tb[j] - ta[i];
      ++hist.counts[static_cast<std::size_t>(nside + bin_offset(tau, bin_width_ps))];
    }
  }
  return hist;
}

CorrelationHistogram normalize_pulsed(const CorrelationHistogram& hist,
                                      std::int64_t rep_period_ps, int n_side_peaks) {
  if (rep_period_ps < 1) throw ValidationError("repetition period must be positive");
  if (n_side_peaks < 1) throw ValidationError("need at least one side peak");
  if (hist.counts.empty() || hist.bin_width_ps < 1)
    throw ValidationError("histogram is empty");
  if (2 * hist.max_delay_ps < (2 * static_cast<std::int64_t>(n_side_peaks) + 1) * rep_period_ps)
    throw ValidationError(
        "histogram spans " + std::to_string(hist.max_delay_ps) + " ps per side; " +
        std::to_string(n_side_peaks) + " side peaks at period " +
        std::to_string(rep_period_ps) + " ps need " +
        std::to_string((2 * n_side_peaks + 1) * rep_period_ps / 2) + " ps");

  CorrelationHistogram out = hist;
  const std::int64_t w = hist.bin_width_ps;
  const std::int64_t t_rep = rep_period_ps;
  const int nside = hist.n_side_bins();
  const int nbins = hist.n_bins();

  // integrated counts per repetition-period window around each peak
  auto peak_of = [&](int k) { return bin_offset(hist.bin_center_ps(k), t_rep); };
  double central = 0.0, side_total = 0.0;
  int side_windows = 0;
  std::vector<std::int64_t> seen_peaks;
  for (int k = 0; k < nbins; ++k) {
    const std::int64_t p = peak_of(k);
    if (p == 0)
      central += static_cast<double>(hist.counts[k]);
    else if (std::llabs(p) <= n_side_peaks)
      side_total += static_cast<double>(hist.counts[k]);
  }
  side_windows = 2 * n_side_peaks;

  out.normalization = CorrelationHistogram::Normalization{
      t_rep, n_side_peaks, central, side_total / side_windows};
  const double mean_side = side_total / side_windows;
  out.g2_zero = central / mean_side;
  out.g2_zero_sigma = out.g2_zero * std::sqrt(1.0 / std::max(central, 1.0) +
                                              1.0 / std::max(side_total, 1.0));

  // pointwise curve: each bin against the side-peak average at the same
  // within-period offset (exact alignment when the period is a multiple of
  // the bin width; nearest bin otherwise)
  out.g2_curve.assign(nbins, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < nbins; ++k) {
    const std::int64_t c = hist.bin_center_ps(k);
    const std::int64_t own_peak = bin_offset(c, t_rep);
    const std::int64_t offset = c - own_peak * t_rep;
    double ref_sum = 0.0;
    int ref_n = 0;
    for (int p = -n_side_peaks; p <= n_side_peaks; ++p) {
      if (p == own_peak || p == 0) continue;  // skip self and the central peak
      const std::int64_t target = offset + p * t_rep;
      const std::int64_t idx = nside + bin_offset(target, w);
      if (idx < 0 || idx >= nbins) continue;
      if (bin_offset(hist.bin_center_ps(static_cast<int>(idx)), t_rep) != p) continue;
      ref_sum += static_cast<double>(hist.counts[static_cast<std::size_t>(idx)]);
      ++ref_n;
    }
    if (ref_n == 0 || ref_sum <= 0.0) continue;
    const double ref_mean = ref_sum / ref_n;
    out.g2_curve[k] = static_cast<double>(hist.counts[k]) / ref_mean;
    if (c == 0) {
      out.g2_zero_pointwise = out.g2_curve[k];
      out.g2_zero_pointwise_sigma =
          out.g2_curve[k] *
          std::sqrt(1.0 / std::max(static_cast<double>(hist.counts[k]), 1.0) +
                    1.0 / std::max(ref_sum, 1.0));
      // an empty tau=0 bin still deserves an uncertainty scaled to the
      // side-peak reference, not a hard zero
      if (hist.counts[k] == 0) out.g2_zero_pointwise_sigma = 1.0 / ref_mean;
    }
  }
  return out;
}

LifetimeHistogram lifetime_histogram(const std::vector<TimeTagRecord>& records,
                                     const std::vector<int>& detector_channels,
                                     std::int64_t bin_width_ps) {
  if (bin_width_ps < 1) throw ValidationError("bin width must be at least 1 ps");
  if (detector_channels.empty()) throw ValidationError("no detector channels given");

  bool wanted[kMaxDetectorChannel + 1] = {};
  for (int ch : detector_channels) {
    if (ch < 1 || ch > kMaxDetectorChannel)
      throw ValidationError("detector channel " + std::to_string(ch) + " out of range");
    wanted[ch] = true;
  }

  LifetimeHistogram hist;
  hist.bin_width_ps = bin_width_ps;
  bool have_sync = false;
  std::int64_t last_sync = 0;
  for (const auto& r : records) {
    if (r.channel == 0) {
      have_sync = true;
      last_sync = r.timestamp_ps;
      ++hist.sync_count;
      continue;
    }
    if (!wanted[r.channel]) continue;
    if (!have_sync) {
      ++hist.skipped_tags;
      continue;
    }
    const std::size_t k = static_cast<std::size_t>((r.timestamp_ps - last_sync) / bin_width_ps);
    if (k >= kMaxLifetimeBins)
      throw CapacityError("lifetime histogram would need over " +
                          std::to_string(kMaxLifetimeBins) + " bins; widen the bins");
    if (k >= hist.counts.size()) hist.counts.resize(k + 1, 0);
    ++hist.counts[k];
  }
  if (!have_sync) throw ValidationError("stream has no sync tags on channel 0");
  return hist;
}

}  // namespace cooprad

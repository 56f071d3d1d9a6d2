// Regenerates the checked-in regression fixtures under tests/data/.
// The correlation golden is produced by an all-pairs reference count (with a
// binary-searched window), deliberately independent of the production
// sliding-window correlator, then normalized and serialized with the library
// writers so byte-level comparisons are meaningful.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cooprad/correlator.hpp"
#include "cooprad/errors.hpp"
#include "cooprad/histogram_io.hpp"
#include "cooprad/rng.hpp"
#include "cooprad/timetag.hpp"

namespace {

using cooprad::CorrelationHistogram;
using cooprad::TimeTagRecord;

std::vector<TimeTagRecord> make_fixture_stream() {
  const std::int64_t period = 25000;
  const std::int64_t n_pulses = 3000;
  const double tau_ps = 1850.0;
  cooprad::Rng rng(42, cooprad::kRngFixture, 0);

  std::vector<TimeTagRecord> tags;
  for (std::int64_t p = 0; p < n_pulses; ++p) {
    tags.push_back({0, p * period});
    for (std::uint8_t ch : {std::uint8_t{1}, std::uint8_t{2}}) {
      if (!rng.bernoulli(0.9)) continue;
      const double dt = rng.exponential(1.0 / tau_ps) + 120.0 * rng.normal();
      tags.push_back({ch, p * period + std::llround(dt)});
    }
  }
  std::sort(tags.begin(), tags.end(), [](const TimeTagRecord& a, const TimeTagRecord& b) {
    return a.timestamp_ps != b.timestamp_ps ? a.timestamp_ps < b.timestamp_ps : a.channel < b.channel;
  });
  return tags;
}

CorrelationHistogram reference_correlate(const std::vector<TimeTagRecord>& records,
                                         int ch_a, int ch_b, std::int64_t w,
                                         std::int64_t max_delay) {
  std::vector<std::int64_t> a_times, b_times;
  for (const auto& r : records) {
    if (r.channel == ch_a) a_times.push_back(r.timestamp_ps);
    if (r.channel == ch_b) b_times.push_back(r.timestamp_ps);
  }
  CorrelationHistogram hist;
  hist.bin_width_ps = w;
  hist.max_delay_ps = max_delay;
  hist.ch_a = ch_a;
  hist.ch_b = ch_b;
  hist.counts_ch_a = static_cast<std::int64_t>(a_times.size());
  hist.counts_ch_b = static_cast<std::int64_t>(b_times.size());
  const std::int64_t nside = (max_delay + w - 1) / w;
  hist.counts.assign(static_cast<std::size_t>(2 * nside + 1), 0);
  for (std::size_t ia = 0; ia < a_times.size(); ++ia) {
    const std::int64_t ta = a_times[ia];
    auto it = std::lower_bound(b_times.begin(), b_times.end(), ta - max_delay);
    for (; it != b_times.end() && *it - ta <= max_delay; ++it) {
      if (ch_a == ch_b && *it == ta &&
          static_cast<std::size_t>(it - b_times.begin()) == ia)
        continue;
      const double tau = static_cast<double>(*it - ta);
      const auto off = static_cast<std::int64_t>(
          std::floor((2.0 * tau + static_cast<double>(w)) / (2.0 * static_cast<double>(w))));
      hist.counts[static_cast<std::size_t>(off + nside)]++;
    }
  }
  return hist;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "tests/data";
  const auto tags = make_fixture_stream();
  cooprad::write_timetag_file(dir + "/corr_fixture.ttg", tags);

  const std::int64_t period = 25000;
  const int side_peaks = 5;
  const std::int64_t max_delay = (2 * side_peaks + 1) * period / 2 + 100;
  auto golden = reference_correlate(tags, 1, 2, 100, max_delay);
  golden = normalize_pulsed(golden, period, side_peaks);

  // sanity: the production correlator must agree bin for bin
  const auto check = correlate(tags, 1, 2, 100, max_delay);
  if (check.counts != golden.counts) {
    std::fprintf(stderr, "correlator mismatch against reference count\n");
    return 1;
  }
  cooprad::write_correlation_csv_file(dir + "/corr_fixture.g2.csv", golden);

  const auto lt = lifetime_histogram(tags, {1, 2}, 25);
  cooprad::write_lifetime_csv_file(dir + "/corr_fixture.lifetime.csv", lt);

  std::printf("fixtures written to %s (%zu tags, g2(0) = %.4f)\n", dir.c_str(),
              tags.size(), golden.g2_zero);
  return 0;
}

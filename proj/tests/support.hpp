// Shared helpers for the test suites: an independently written all-pairs
// correlation reference, random stream generators, and synthetic decay
// histogram samplers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cooprad/correlator.hpp"
#include "cooprad/rng.hpp"
#include "cooprad/timetag.hpp"

namespace testsupport {

/// All-pairs coincidence count. Scans every ordered (a, b) pair with an
/// early exit once the sorted b times leave the window; the only shared
/// convention with the production correlator is the bin definition
/// floor((2 tau + w) / (2 w)).
inline std::vector<std::int64_t> brute_force_counts(
    const std::vector<cooprad::TimeTagRecord>& records, int ch_a, int ch_b,
    std::int64_t w, std::int64_t max_delay) {
  std::vector<std::int64_t> a_times, b_times;
  for (const auto& r : records) {
    if (r.channel == ch_a) a_times.push_back(r.timestamp_ps);
    if (r.channel == ch_b) b_times.push_back(r.timestamp_ps);
  }
  const std::int64_t nside = (max_delay + w - 1) / w;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(2 * nside + 1), 0);
  for (std::size_t ia = 0; ia < a_times.size(); ++ia) {
    for (std::size_t ib = 0; ib < b_times.size(); ++ib) {
      const std::int64_t tau = b_times[ib] - a_times[ia];
      if (tau > max_delay) break;  // b sorted ascending: no later match
      if (tau < -max_delay) continue;
      if (ch_a == ch_b && ia == ib) continue;
      const auto off = static_cast<std::int64_t>(
          std::floor((2.0 * static_cast<double>(tau) + static_cast<double>(w)) /
                     (2.0 * static_cast<double>(w))));
      counts[static_cast<std::size_t>(off + nside)]++;
    }
  }
  return counts;
}

/// Sorted random tag stream over [0, span_ps) with channels 0..max_channel.
inline std::vector<cooprad::TimeTagRecord> random_stream(cooprad::Rng& rng,
                                                         int n_tags,
                                                         std::int64_t span_ps,
                                                         int max_channel = 2) {
  std::vector<cooprad::TimeTagRecord> tags(static_cast<std::size_t>(n_tags));
  for (auto& t : tags) {
    t.channel = static_cast<std::uint8_t>(rng.next() % (max_channel + 1));
    t.timestamp_ps = static_cast<std::int64_t>(rng.next() % span_ps);
  }
  std::sort(tags.begin(), tags.end(),
            [](const cooprad::TimeTagRecord& a, const cooprad::TimeTagRecord& b) {
              return a.timestamp_ps != b.timestamp_ps ? a.timestamp_ps < b.timestamp_ps
                                                      : a.channel < b.channel;
            });
  return tags;
}

/// Histogram of n samples of t0 + Exp(tau) + Gaussian jitter, the synthetic
/// instrument-response-convolved decay used by the fit-recovery suites.
inline cooprad::LifetimeHistogram sample_mono(cooprad::Rng& rng, double tau_ns,
                                              double irf_fwhm_ps, std::int64_t n,
                                              std::int64_t bin_w = 25,
                                              int n_bins = 1000,
                                              double t0_ps = 2000.0) {
  const double sigma_ps = irf_fwhm_ps / 2.3548200450309493;
  cooprad::LifetimeHistogram hist;
  hist.bin_width_ps = bin_w;
  hist.counts.assign(static_cast<std::size_t>(n_bins), 0);
  hist.sync_count = n;
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = t0_ps + rng.exponential(1.0 / (tau_ns * 1000.0)) +
                     sigma_ps * rng.normal();
    const std::int64_t k = static_cast<std::int64_t>(std::floor(t / bin_w));
    if (k >= 0 && k < n_bins) hist.counts[static_cast<std::size_t>(k)]++;
  }
  return hist;
}

/// Two-component variant; a1 is the fraction of counts in the tau1 branch.
inline cooprad::LifetimeHistogram sample_bi(cooprad::Rng& rng, double tau1_ns,
                                            double tau2_ns, double a1,
                                            double irf_fwhm_ps, std::int64_t n,
                                            std::int64_t bin_w = 25,
                                            int n_bins = 1000,
                                            double t0_ps = 2000.0) {
  const double sigma_ps = irf_fwhm_ps / 2.3548200450309493;
  cooprad::LifetimeHistogram hist;
  hist.bin_width_ps = bin_w;
  hist.counts.assign(static_cast<std::size_t>(n_bins), 0);
  hist.sync_count = n;
  for (std::int64_t i = 0; i < n; ++i) {
    const double tau = rng.bernoulli(a1) ? tau1_ns : tau2_ns;
    const double t =
        t0_ps + rng.exponential(1.0 / (tau * 1000.0)) + sigma_ps * rng.normal();
    const std::int64_t k = static_cast<std::int64_t>(std::floor(t / bin_w));
    if (k >= 0 && k < n_bins) hist.counts[static_cast<std::size_t>(k)]++;
  }
  return hist;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testsupport

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cooprad {

/// Pulsed-excitation schedule. Each pulse promotes every emitter to the
/// excited state with probability excitation_probability (1.0 = pi pulse).
struct PulseTrainConfig {
  double rep_rate_mhz = 40.0;
  std::int64_t n_pulses = 0;
  double excitation_probability = 1.0;

  std::int64_t period_ps() const;
  void validate() const;

  /// Non-fatal configuration smells, e.g. a period shorter than ~5 emitter
  /// lifetimes (cascades would bleed into the next pulse window).
  std::vector<std::string> warnings(double lifetime_ns) const;
};

/// Detection chain: IRF jitter, detector efficiency, 50:50 splitter to two
/// detectors, per-detector dead time, and dark counts.
struct DetectorChainConfig {
  double irf_fwhm_ps = 500.0;
  double efficiency = 1.0;
  double splitter_ratio = 0.5;   // probability of routing to detector 1
  double dead_time_ps = 25000.0;
  double dark_rate_hz = 0.0;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

}  // namespace cooprad

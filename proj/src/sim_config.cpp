#include "cooprad/sim_config.hpp"

#include <cmath>
#include <cstdio>

#include "cooprad/errors.hpp"

namespace cooprad {

std::int64_t PulseTrainConfig::period_ps() const {
  return static_cast<std::int64_t>(std::llround(1.0e6 / rep_rate_mhz));
}

void PulseTrainConfig::validate() const {
  if (!(rep_rate_mhz > 0.0))
    throw ValidationError("repetition rate must be positive");
  if (n_pulses < 1)
    throw ValidationError("pulse count must be at least 1");
  if (!(excitation_probability > 0.0) || excitation_probability > 1.0)
    throw ValidationError("excitation probability must be in (0, 1]");
  if (period_ps() < 1)
    throw ValidationError("repetition period rounds to less than 1 ps");
}

std::vector<std::string> PulseTrainConfig::warnings(double lifetime_ns) const {
  std::vector<std::string> out;
  const double period_ns = static_cast<double>(period_ps()) * 1e-3;
  if (lifetime_ns > 0.0 && period_ns < 5.0 * lifetime_ns) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "repetition period %.3g ns is under 5 lifetimes (%.3g ns); "
                  "decays will bleed into later pulse windows",
                  period_ns, lifetime_ns);
    out.emplace_back(buf);
  }
  return out;
}

void DetectorChainConfig::validate() const {
  if (irf_fwhm_ps < 0.0) throw ValidationError("IRF width must be nonnegative");
  if (efficiency < 0.0 || efficiency > 1.0)
    throw ValidationError("detection efficiency must be in [0, 1]");
  if (splitter_ratio < 0.0 || splitter_ratio > 1.0)
    throw ValidationError("splitter ratio must be in [0, 1]");
  if (dead_time_ps < 0.0) throw ValidationError("dead time must be nonnegative");
  if (dark_rate_hz < 0.0) throw ValidationError("dark rate must be nonnegative");
}

}  // namespace cooprad

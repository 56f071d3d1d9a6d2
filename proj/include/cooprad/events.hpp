#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace cooprad {

/// One photon emission, referenced to its excitation pulse.
/// emitter_branch is diagnostic: the ladder rung for the cascade engine,
/// the jump-channel index for the trajectory engine, the replica index for
/// independent ensembles.
struct EmissionEvent {
  std::int64_t pulse_index;
  std::int32_t time_since_pulse_ps;
  std::int16_t emitter_branch;
};

inline std::int64_t absolute_time_ps(const EmissionEvent& e, std::int64_t period_ps) {
  return e.pulse_index * period_ps + e.time_since_pulse_ps;
}

/// ns -> integer ps emission offset; clamped (overflow is exponentially
/// unlikely at physical rates).
inline std::int32_t offset_ps_from_ns(double t_ns) {
  const std::int64_t ps = std::llround(t_ns * 1000.0);
  return static_cast<std::int32_t>(
      std::min<std::int64_t>(ps, std::numeric_limits<std::int32_t>::max()));
}

/// Re-attributes events whose offset overflowed the repetition period to the
/// pulse window they physically fall in, then sorts by absolute time.
void finalize_events(std::vector<EmissionEvent>& events, std::int64_t period_ps);

}  // namespace cooprad

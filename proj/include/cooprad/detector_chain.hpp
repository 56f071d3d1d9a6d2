#pragma once

#include <cstdint>
#include <vector>

#include "cooprad/events.hpp"
#include "cooprad/sim_config.hpp"
#include "cooprad/timetag.hpp"

namespace cooprad {

/// Pushes emission events through the measurement model: per-event detection
/// (efficiency), 50:50 routing to two detectors, Gaussian IRF jitter, added
/// dark counts, sync tags on channel 0, and finally per-detector
/// non-paralyzable dead time. Output is a sorted tag stream.
std::vector<TimeTagRecord> apply_detector_chain(const std::vector<EmissionEvent>& events,
                                                const PulseTrainConfig& pulses,
                                                const DetectorChainConfig& chain);

}  // namespace cooprad

#pragma once

#include <cstdint>
#include <vector>

#include "cooprad/dicke.hpp"
#include "cooprad/events.hpp"
#include "cooprad/rng.hpp"
#include "cooprad/sim_config.hpp"

namespace cooprad {

/// Samples emission events for a pulse train by stepping down a collective
/// rate ladder. Each pulse draws the number of initially excited emitters
/// from Binomial(N, excitation_probability) and enters the ladder at the
/// matching rung. Deterministic for a given (seed, pulse index), independent
/// of how pulses are batched.
std::vector<EmissionEvent> simulate_dicke_cascade(const DickeLadder& ladder,
                                                  const PulseTrainConfig& pulses,
                                                  std::uint64_t seed);

/// Same pulse train driving N independent emitters with rate gamma0 each
/// (emitter_branch records which emitter fired).
std::vector<EmissionEvent> simulate_independent(int n, double gamma0_per_ns,
                                                const PulseTrainConfig& pulses,
                                                std::uint64_t seed);

}  // namespace cooprad

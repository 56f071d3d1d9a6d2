#pragma once

#include <cstdint>
#include <vector>

#include "cooprad/decay_matrix.hpp"
#include "cooprad/events.hpp"
#include "cooprad/sim_config.hpp"

namespace cooprad {

struct TrajectoryOptions {
  /// Use the fixed-step norm-tracking integrator even when the analytic
  /// survival solver would apply (no coherent coupling).
  bool force_integrator = false;
  /// Integrator step as a fraction of the fastest decay scale.
  double step_fraction = 0.01;
};

inline constexpr int kMaxTrajectoryEmitters = 12;

/// Monte-Carlo wavefunction sampler for an arbitrary decay matrix. Evolves
/// the conditional state under the non-Hermitian effective Hamiltonian and
/// applies quantum jumps through the eigenmodes of Gamma; exact waiting-time
/// sampling when there is no coherent coupling, RK4 norm tracking otherwise.
/// State space is 2^N, so N is capped at kMaxTrajectoryEmitters.
std::vector<EmissionEvent> simulate_trajectories(const DecayMatrix& decay,
                                                 const PulseTrainConfig& pulses,
                                                 std::uint64_t seed,
                                                 const TrajectoryOptions& options = {});

}  // namespace cooprad

#include "cooprad/cascade.hpp"

#include <cstdint>

#include "cooprad/errors.hpp"

namespace cooprad {

std::vector<EmissionEvent> simulate_dicke_cascade(const DickeLadder& ladder,
                                                  const PulseTrainConfig& pulses,
                                                  std::uint64_t seed) {
  pulses.validate();
  const int n = ladder.n_emitters;
  if (n < 1 || ladder.rates_per_ns.size() != static_cast<std::size_t>(n))
    throw ValidationError("malformed rate ladder");
  for (double r : ladder.rates_per_ns)
    if (!(r > 0.0)) throw ValidationError("ladder rates must be positive");

  std::vector<EmissionEvent> events;
  events.reserve(static_cast<std::size_t>(
      static_cast<double>(pulses.n_pulses) * n * pulses.excitation_probability + 16));

  for (std::int64_t pulse = 0; pulse < pulses.n_pulses; ++pulse) {
    Rng rng(seed, kRngCascade, static_cast<std::uint64_t>(pulse));
    const int excited = rng.binomial(n, pulses.excitation_probability);
    if (excited == 0) continue;
    double t_ns = 0.0;
    for (int s = n - excited; s < n; ++s) {
      t_ns += rng.exponential(ladder.rates_per_ns[s]);
      events.push_back({pulse, offset_ps_from_ns(t_ns), static_cast<std::int16_t>(s)});
    }
  }
  finalize_events(events, pulses.period_ps());
  return events;
}

std::vector<EmissionEvent> simulate_independent(int n, double gamma0_per_ns,
                                                const PulseTrainConfig& pulses,
                                                std::uint64_t seed) {
  pulses.validate();
  if (n < 1) throw ValidationError("need at least one emitter");
  if (!(gamma0_per_ns > 0.0)) throw ValidationError("single-emitter rate must be positive");

  std::vector<EmissionEvent> events;
  events.reserve(static_cast<std::size_t>(
      static_cast<double>(pulses.n_pulses) * n * pulses.excitation_probability + 16));

  for (std::int64_t pulse = 0; pulse < pulses.n_pulses; ++pulse) {
    Rng rng(seed, kRngCascade, static_cast<std::uint64_t>(pulse));
    for (int i = 0; i < n; ++i) {
      if (!rng.bernoulli(pulses.excitation_probability)) continue;
      events.push_back({pulse, offset_ps_from_ns(rng.exponential(gamma0_per_ns)),
                        static_cast<std::int16_t>(i)});
    }
  }
  finalize_events(events, pulses.period_ps());
  return events;
}

}  // namespace cooprad

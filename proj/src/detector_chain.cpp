#include "cooprad/detector_chain.hpp"

#include <algorithm>
#include <cmath>

#include "cooprad/rng.hpp"
#include "cooprad/errors.hpp"

namespace cooprad {

namespace {
constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)
}

std::vector<TimeTagRecord> apply_detector_chain(const std::vector<EmissionEvent>& events,
                                                const PulseTrainConfig& pulses,
                                                const DetectorChainConfig& chain) {
  pulses.validate();
  chain.validate();
  const std::int64_t period = pulses.period_ps();
  const double sigma_ps = chain.irf_fwhm_ps / kFwhmPerSigma;

  std::vector<TimeTagRecord> tags;
  tags.reserve(events.size() + static_cast<std::size_t>(pulses.n_pulses) + 64);

  // photon tags: per-pulse RNG substream, consumed in event order within the
  // pulse (events arrive sorted, so a pulse's events are contiguous)
  std::int64_t cur_pulse = -1;
  Rng rng(chain.rng_seed, kRngChain, 0);
  for (const auto& e : events) {
    if (e.pulse_index != cur_pulse) {
      cur_pulse = e.pulse_index;
      rng = Rng(chain.rng_seed, kRngChain, static_cast<std::uint64_t>(cur_pulse));
    }
    if (!rng.bernoulli(chain.efficiency)) continue;
    const std::uint8_t channel = rng.bernoulli(chain.splitter_ratio) ? 1 : 2;
    std::int64_t t = absolute_time_ps(e, period);
    if (sigma_ps > 0.0) t += std::llround(rng.normal(0.0, sigma_ps));
    tags.push_back({channel, t});
  }

  // dark counts: independent Poisson process per detector over the run span
  const std::int64_t span_ps = pulses.n_pulses * period;
  if (chain.dark_rate_hz > 0.0) {
    const double rate_per_ps = chain.dark_rate_hz * 1e-12;
    for (std::uint8_t channel = 1; channel <= 2; ++channel) {
      Rng dark(chain.rng_seed, kRngDarkCounts, channel);
      double t = dark.exponential(rate_per_ps);
      while (t < static_cast<double>(span_ps)) {
        tags.push_back({channel, static_cast<std::int64_t>(t)});
        t += dark.exponential(rate_per_ps);
      }
    }
  }

  // sync tags mark every pulse on channel 0
  for (std::int64_t p = 0; p < pulses.n_pulses; ++p) tags.push_back({0, p * period});

  std::sort(tags.begin(), tags.end(), [](const TimeTagRecord& a, const TimeTagRecord& b) {
    return a.timestamp_ps < b.timestamp_ps ||
           (a.timestamp_ps == b.timestamp_ps && a.channel < b.channel);
  });

  // non-paralyzable dead time per detector channel (syncs exempt)
  if (chain.dead_time_ps > 0.0) {
    const std::int64_t dead = static_cast<std::int64_t>(std::llround(chain.dead_time_ps));
    std::int64_t last[3] = {0, 0, 0};
    bool seen[3] = {false, false, false};
    std::size_t kept = 0;
    for (const auto& tag : tags) {
      if (tag.channel > 0) {
        if (seen[tag.channel] && tag.timestamp_ps - last[tag.channel] < dead) continue;
        seen[tag.channel] = true;
        last[tag.channel] = tag.timestamp_ps;
      }
      tags[kept++] = tag;
    }
    tags.resize(kept);
  }
  return tags;
}

}  // namespace cooprad

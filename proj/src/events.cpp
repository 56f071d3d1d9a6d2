#include "cooprad/events.hpp"

#include <algorithm>
#include <tuple>

#include "cooprad/errors.hpp"

namespace cooprad {

void finalize_events(std::vector<EmissionEvent>& events, std::int64_t period_ps) {
  if (period_ps < 1) throw ValidationError("repetition period must be positive");
  for (auto& e : events) {
    if (e.time_since_pulse_ps >= period_ps) {
      e.pulse_index += e.time_since_pulse_ps / period_ps;
      e.time_since_pulse_ps = static_cast<std::int32_t>(e.time_since_pulse_ps % period_ps);
    }
  }
  std::sort(events.begin(), events.end(),
            [period_ps](const EmissionEvent& a, const EmissionEvent& b) {
              return std::make_tuple(absolute_time_ps(a, period_ps), a.emitter_branch) <
                     std::make_tuple(absolute_time_ps(b, period_ps), b.emitter_branch);
            });
}

}  // namespace cooprad

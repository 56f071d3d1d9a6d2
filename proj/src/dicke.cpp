#include "cooprad/dicke.hpp"

#include "cooprad/errors.hpp"

namespace cooprad {

DickeLadder dicke_ladder(int n, double gamma0_per_ns) {
  if (n < 1) throw ValidationError("ladder needs at least one emitter");
  if (!(gamma0_per_ns > 0.0)) throw ValidationError("single-emitter rate must be positive");
  DickeLadder ladder;
  ladder.n_emitters = n;
  const double j = n / 2.0;
  for (int s = 0; s < n; ++s) {
    const double m = j - s;
    ladder.rates_per_ns.push_back(gamma0_per_ns * (j + m) * (j - m + 1.0));
  }
  return ladder;
}

RateEnhancement effective_rate_enhancement(const DickeLadder& ladder) {
  if (ladder.n_emitters < 1 ||
      ladder.rates_per_ns.size() != static_cast<std::size_t>(ladder.n_emitters))
    throw ValidationError("malformed rate ladder");
  // rates[0] = N * gamma0 for the symmetric ladder
  const double gamma0 = ladder.rates_per_ns.front() / ladder.n_emitters;
  double total_time = 0.0;
  for (double r : ladder.rates_per_ns) {
    if (!(r > 0.0)) throw ValidationError("ladder rates must be positive");
    total_time += 1.0 / r;
  }
  RateEnhancement e;
  e.first_emission = ladder.rates_per_ns.front() / gamma0;
  e.cascade_duration = (1.0 / gamma0) / total_time;  // vs one single-emitter lifetime
  return e;
}

}  // namespace cooprad

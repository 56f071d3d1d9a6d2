#include "cooprad/scaling.hpp"

#include <cmath>
#include <set>

#include "cooprad/errors.hpp"

namespace cooprad {

ScalingFit intensity_scaling(const std::vector<std::pair<int, double>>& amplitude_vs_n) {
  std::set<int> distinct;
  for (const auto& [n, amp] : amplitude_vs_n) {
    if (n < 1) throw ValidationError("emitter counts must be positive");
    if (!(amp > 0.0)) throw ValidationError("peak amplitudes must be positive");
    distinct.insert(n);
  }
  if (distinct.size() < 3)
    throw ValidationError("intensity scaling needs at least 3 distinct emitter counts");

  const int np = static_cast<int>(amplitude_vs_n.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, amp] : amplitude_vs_n) {
    const double x = std::log(static_cast<double>(n)), y = std::log(amp);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double sxx_c = sxx - sx * sx / np;
  const double slope = (sxy - sx * sy / np) / sxx_c;
  const double intercept = (sy - slope * sx) / np;

  double ss_res = 0.0;
  for (const auto& [n, amp] : amplitude_vs_n) {
    const double r = std::log(amp) - (intercept + slope * std::log(static_cast<double>(n)));
    ss_res += r * r;
  }

  ScalingFit fit;
  fit.exponent = slope;
  fit.log_prefactor = intercept;
  fit.n_points = np;
  fit.exponent_sigma = np > 2 ? std::sqrt(ss_res / (np - 2) / sxx_c) : 0.0;
  return fit;
}

}  // namespace cooprad

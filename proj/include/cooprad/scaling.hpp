#pragma once

#include <vector>

namespace cooprad {

/// Power-law fit I = c * N^alpha via least squares on (log N, log I).
struct ScalingFit {
  double exponent = 0.0;
  double exponent_sigma = 0.0;
  double log_prefactor = 0.0;
  int n_points = 0;
};

/// Requires >= 3 distinct N values with positive amplitudes.
ScalingFit intensity_scaling(const std::vector<std::pair<int, double>>& amplitude_vs_n);

}  // namespace cooprad

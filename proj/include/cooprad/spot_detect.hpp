#pragma once

#include <Eigen/Dense>
#include <vector>

namespace cooprad {

/// One detected emission spot on a raster (pixel coordinates; x = column,
/// y = row).
struct Spot {
  double x_px = 0.0;
  double y_px = 0.0;
  double integrated_brightness = 0.0;
  double fwhm_px = 0.0;
};

struct SpotDetectParams {
  /// Detection threshold: median + k_mad robust sigmas (1.4826 * MAD).
  double k_mad = 5.0;
  /// Half-size of the centroid/brightness window around each maximum,
  /// roughly the PSF FWHM in pixels.
  int window_radius_px = 3;
  /// Maxima closer than this (pixels) are merged, keeping the brighter one.
  double merge_radius_px = 2.0;
};

/// 8-neighbor local maxima above the robust threshold, refined to
/// intensity-weighted centroids; FWHM from second moments of the
/// background-subtracted window. A featureless raster yields an empty list.
std::vector<Spot> detect_spots(const Eigen::MatrixXd& raster,
                               const SpotDetectParams& params = {});

}  // namespace cooprad

#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cooprad/ensemble.hpp"

namespace cooprad {

/// Raster geometry for a scanned photoluminescence map. Pixel (ix, iy)
/// covers [x0 + ix*pixel_nm, ...) etc.; pixel centers sit at +pixel_nm/2.
struct MapGrid {
  double x0_nm = 0.0;
  double y0_nm = 0.0;
  int nx = 0;
  int ny = 0;
  double pixel_nm = 100.0;

  double pixel_center_x(int ix) const { return x0_nm + (ix + 0.5) * pixel_nm; }
  double pixel_center_y(int iy) const { return y0_nm + (iy + 0.5) * pixel_nm; }
  void validate() const;
};

/// One site on the map: an ensemble plus a mean photon yield that scales its
/// spot brightness.
struct MapSite {
  EmitterEnsemble ensemble;
  double brightness = 1.0;
};

/// Renders the sum of isotropic Gaussian spots (PSF of the given FWHM)
/// centered at all emitter xy positions. Raster is (ny rows) x (nx cols),
/// row iy / col ix. An empty site list is a validation error.
Eigen::MatrixXd render_pl_map(const std::vector<MapSite>& sites,
                              double psf_fwhm_nm, const MapGrid& grid);

}  // namespace cooprad

#include "cooprad/pl_map.hpp"

#include <cmath>

#include "cooprad/errors.hpp"

namespace cooprad {

void MapGrid::validate() const {
  if (nx < 1 || ny < 1) throw ValidationError("raster grid must have at least one pixel");
  if (!(pixel_nm > 0.0)) throw ValidationError("pixel size must be positive");
}

Eigen::MatrixXd render_pl_map(const std::vector<MapSite>& sites, double psf_fwhm_nm,
                              const MapGrid& grid) {
  if (sites.empty()) throw ValidationError("no emitter sites to render");
  if (!(psf_fwhm_nm > 0.0)) throw ValidationError("PSF width must be positive");
  grid.validate();

  const double sigma = psf_fwhm_nm / 2.3548200450309493;
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  Eigen::MatrixXd raster = Eigen::MatrixXd::Zero(grid.ny, grid.nx);
  for (const auto& site : sites) {
    site.ensemble.validate();
    if (!(site.brightness >= 0.0)) throw ValidationError("site brightness must be nonnegative");
    for (const auto& pos : site.ensemble.positions_nm) {
      for (int iy = 0; iy < grid.ny; ++iy) {
        const double dy = grid.pixel_center_y(iy) - pos.y();
        for (int ix = 0; ix < grid.nx; ++ix) {
          const double dx = grid.pixel_center_x(ix) - pos.x();
          raster(iy, ix) += site.brightness * std::exp(-(dx * dx + dy * dy) * inv2s2);
        }
      }
    }
  }
  return raster;
}

}  // namespace cooprad

#include "cooprad/spot_detect.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cooprad/errors.hpp"

namespace cooprad {

std::vector<Spot> detect_spots(const Eigen::MatrixXd& raster, const SpotDetectParams& params) {
  if (raster.size() == 0) throw ValidationError("raster is empty");
  if (params.window_radius_px < 1) throw ValidationError("window radius must be positive");
  const int ny = static_cast<int>(raster.rows());
  const int nx = static_cast<int>(raster.cols());

  // robust background: median + k * 1.4826 * MAD
  std::vector<double> flat(raster.data(), raster.data() + raster.size());
  auto median_of = [](std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
  };
  const double med = median_of(flat);
  for (double& v : flat) v = std::abs(v - med);
  const double mad = median_of(flat);
  const double threshold = med + params.k_mad * 1.4826 * mad;

  // candidate maxima: above threshold and >= all 8 neighbors
  struct Cand { int x, y; double v; };
  std::vector<Cand> cands;
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const double v = raster(y, x);
      if (v <= threshold) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy)
        for (int dx = -1; dx <= 1 && is_max; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int yy = y + dy, xx = x + dx;
          if (yy < 0 || yy >= ny || xx < 0 || xx >= nx) continue;
          if (raster(yy, xx) > v) is_max = false;
          // ties on a plateau: keep only the lexicographically first pixel
          if (raster(yy, xx) == v && (yy < y || (yy == y && xx < x))) is_max = false;
        }
      if (is_max) cands.push_back({x, y, v});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.v > b.v; });

  // greedy merge of near-coincident maxima, brightest first
  std::vector<Cand> kept;
  for (const auto& c : cands) {
    bool merged = false;
    for (const auto& k : kept) {
      const double dx = c.x - k.x, dy = c.y - k.y;
      if (std::sqrt(dx * dx + dy * dy) < params.merge_radius_px) { merged = true; break; }
    }
    if (!merged) kept.push_back(c);
  }

  // refine each detection in a PSF-sized window
  std::vector<Spot> spots;
  const int rad = params.window_radius_px;
  for (const auto& c : kept) {
    double sum = 0, sx = 0, sy = 0;
    for (int y = std::max(0, c.y - rad); y <= std::min(ny - 1, c.y + rad); ++y)
      for (int x = std::max(0, c.x - rad); x <= std::min(nx - 1, c.x + rad); ++x) {
        const double w = std::max(raster(y, x) - med, 0.0);
        sum += w;
        sx += w * x;
        sy += w * y;
      }
    if (sum <= 0.0) continue;
    Spot s;
    s.x_px = sx / sum;
    s.y_px = sy / sum;
    s.integrated_brightness = sum;
    double vxx = 0, vyy = 0;
    for (int y = std::max(0, c.y - rad); y <= std::min(ny - 1, c.y + rad); ++y)
      for (int x = std::max(0, c.x - rad); x <= std::min(nx - 1, c.x + rad); ++x) {
        const double w = std::max(raster(y, x) - med, 0.0);
        vxx += w * (x - s.x_px) * (x - s.x_px);
        vyy += w * (y - s.y_px) * (y - s.y_px);
      }
    s.fwhm_px = 2.3548200450309493 * std::sqrt(0.5 * (vxx + vyy) / sum);
    spots.push_back(s);
  }
  return spots;
}

}  // namespace cooprad

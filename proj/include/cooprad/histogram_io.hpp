#pragma once

#include <iosfwd>
#include <string>

#include "cooprad/correlator.hpp"
#include "cooprad/intensity.hpp"

#include <Eigen/Dense>

namespace cooprad {

// CSV serialization for histograms: `#`-prefixed metadata lines, a
// `bin_center_ps,counts` header row, then one row per bin. Readers tolerate
// and skip unknown metadata keys.

void write_correlation_csv(std::ostream& out, const CorrelationHistogram& hist);
void write_correlation_csv_file(const std::string& path, const CorrelationHistogram& hist);
CorrelationHistogram read_correlation_csv(std::istream& in);
CorrelationHistogram read_correlation_csv_file(const std::string& path);

void write_lifetime_csv(std::ostream& out, const LifetimeHistogram& hist);
void write_lifetime_csv_file(const std::string& path, const LifetimeHistogram& hist);
LifetimeHistogram read_lifetime_csv(std::istream& in);
LifetimeHistogram read_lifetime_csv_file(const std::string& path);

/// PL raster as a plain CSV grid (one row per raster row, no header).
void write_raster_csv_file(const std::string& path, const Eigen::MatrixXd& raster);
Eigen::MatrixXd read_raster_csv_file(const std::string& path);

}  // namespace cooprad

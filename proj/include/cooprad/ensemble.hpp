#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

namespace cooprad {

/// N two-level emitters: positions in nm, unit dipole orientations, shared
/// transition wavelength and single-emitter radiative rate.
struct EmitterEnsemble {
  std::vector<Eigen::Vector3d> positions_nm;
  std::vector<Eigen::Vector3d> dipoles;
  double wavelength_nm = 0.0;
  double gamma0_per_ns = 0.0;

  int size() const { return static_cast<int>(positions_nm.size()); }
  double wavenumber_per_nm() const;         // k = 2*pi/lambda
  double single_lifetime_ns() const { return 1.0 / gamma0_per_ns; }

  /// Throws ValidationError on any broken invariant (size mismatch,
  /// non-unit dipole, non-positive wavelength or rate).
  void validate() const;
};

/// n coincident emitters with parallel dipoles along z: the ideal
/// maximal-cooperativity reference geometry.
EmitterEnsemble dicke_cluster(int n, double wavelength_nm, double gamma0_per_ns);

/// n emitters on the x axis with the given spacing, dipoles along z
/// (perpendicular to the separation axis).
EmitterEnsemble line_ensemble(int n, double spacing_nm, double wavelength_nm,
                              double gamma0_per_ns);

// Geometry file format: one header line "wavelength_nm=<v> gamma0_per_ns=<v>",
// then one emitter per line as "x y z dx dy dz" (nm, unit vector).
EmitterEnsemble read_ensemble(std::istream& in);
EmitterEnsemble read_ensemble_file(const std::string& path);
void write_ensemble(const EmitterEnsemble& e, std::ostream& out);
void write_ensemble_file(const EmitterEnsemble& e, const std::string& path);

}  // namespace cooprad

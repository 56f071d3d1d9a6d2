#pragma once

#include <Eigen/Dense>
#include <optional>

#include "cooprad/ensemble.hpp"

namespace cooprad {

/// Collective decay matrix Gamma (and optional coherent coupling J) for an
/// ensemble geometry. Gamma is symmetric PSD with diagonal gamma0; J is
/// symmetric with zero diagonal. Both in 1/ns.
struct DecayMatrix {
  Eigen::MatrixXd gamma;
  std::optional<Eigen::MatrixXd> coupling;

  int size() const { return static_cast<int>(gamma.rows()); }
  double gamma0() const { return gamma(0, 0); }

  /// Checks symmetry, diagonal, |Gamma_ij| <= gamma0 and positive
  /// semi-definiteness (eigenvalues >= -1e-9 * gamma0).
  void validate() const;
};

// Scalar free-space kernels for a dipole pair, as Gamma_ij/gamma0 and
// J_ij/gamma0. cos_theta is d.r for parallel dipoles d at separation r;
// kr = 2*pi*r/lambda.
double decay_kernel(double kr, double cos_theta);
double coupling_kernel(double kr, double cos_theta);

// Bilinear generalization for arbitrary unit dipoles di, dj and separation
// vector r (same units as 1/k).
double pair_decay_rate(const Eigen::Vector3d& di, const Eigen::Vector3d& dj,
                       const Eigen::Vector3d& r, double k, double gamma0);
double pair_coupling_rate(const Eigen::Vector3d& di, const Eigen::Vector3d& dj,
                          const Eigen::Vector3d& r, double k, double gamma0);

/// Builds Gamma (and J when include_coupling) from the ensemble geometry.
/// Coincident emitters are rejected unless dicke_limit_override is set; the
/// coupling kernel is singular at zero separation, so include_coupling plus
/// coincident emitters is always an error.
DecayMatrix build_decay_matrix(const EmitterEnsemble& ensemble,
                               bool include_coupling = false,
                               bool dicke_limit_override = false);

/// Gamma for the ideal Dicke limit (all entries gamma0), without going
/// through a geometry.
DecayMatrix dicke_limit_matrix(int n, double gamma0_per_ns);

}  // namespace cooprad

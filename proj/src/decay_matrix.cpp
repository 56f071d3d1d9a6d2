#include "cooprad/decay_matrix.hpp"

#include <cmath>
#include <string>

#include "cooprad/errors.hpp"

namespace cooprad {

namespace {

constexpr double kCoincidentNm = 1e-9;  // separations below this count as zero
constexpr double kSmallKr = 1e-3;       // switch to series to avoid cancellation

// Gamma_ij/gamma0 for angular factors a = di.dj - (di.rh)(dj.rh) and
// b = di.dj - 3 (di.rh)(dj.rh).
double decay_core(double kr, double a, double b) {
  if (kr < kSmallKr) {
    const double x2 = kr * kr;
    return 1.5 * (a * (1.0 - x2 / 6.0 + x2 * x2 / 120.0) +
                  b * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0));
  }
  const double s = std::sin(kr), c = std::cos(kr);
  return 1.5 * (a * s / kr + b * (c / (kr * kr) - s / (kr * kr * kr)));
}

// J_ij/gamma0; diverges as 1/(kr)^3 and has no zero-separation limit.
double coupling_core(double kr, double a, double b) {
  const double s = std::sin(kr), c = std::cos(kr);
  return 0.75 * (-a * c / kr + b * (s / (kr * kr) + c / (kr * kr * kr)));
}

}  // namespace

double decay_kernel(double kr, double cos_theta) {
  if (kr < 0.0) throw ValidationError("kr must be nonnegative");
  const double c2 = cos_theta * cos_theta;
  return decay_core(kr, 1.0 - c2, 1.0 - 3.0 * c2);
}

double coupling_kernel(double kr, double cos_theta) {
  if (!(kr > 0.0))
    throw ValidationError("coherent coupling kernel is singular at zero separation");
  const double c2 = cos_theta * cos_theta;
  return coupling_core(kr, 1.0 - c2, 1.0 - 3.0 * c2);
}

double pair_decay_rate(const Eigen::Vector3d& di, const Eigen::Vector3d& dj,
                       const Eigen::Vector3d& r, double k, double gamma0) {
  const double rn = r.norm();
  const double dd = di.dot(dj);
  if (rn < kCoincidentNm) return gamma0 * dd;  // coincident limit
  const Eigen::Vector3d rh = r / rn;
  const double pi = di.dot(rh), pj = dj.dot(rh);
  return gamma0 * decay_core(k * rn, dd - pi * pj, dd - 3.0 * pi * pj);
}

double pair_coupling_rate(const Eigen::Vector3d& di, const Eigen::Vector3d& dj,
                          const Eigen::Vector3d& r, double k, double gamma0) {
  const double rn = r.norm();
  if (rn < kCoincidentNm)
    throw ValidationError("coherent coupling diverges for coincident emitters");
  const Eigen::Vector3d rh = r / rn;
  const double dd = di.dot(dj);
  const double pi = di.dot(rh), pj = dj.dot(rh);
  return gamma0 * coupling_core(k * rn, dd - pi * pj, dd - 3.0 * pi * pj);
}

void DecayMatrix::validate() const {
  const int n = static_cast<int>(gamma.rows());
  if (n < 1 || gamma.cols() != n) throw ValidationError("decay matrix must be square");
  const double g0 = gamma(0, 0);
  if (!(g0 > 0.0)) throw ValidationError("decay matrix diagonal must be positive");
  const double tol = 1e-9 * g0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(gamma(i, i) - g0) > tol)
      throw ValidationError("decay matrix diagonal is not uniform");
    for (int j = 0; j < n; ++j) {
      if (std::abs(gamma(i, j) - gamma(j, i)) > tol)
        throw ValidationError("decay matrix is not symmetric");
      if (std::abs(gamma(i, j)) > g0 * (1.0 + 1e-9))
        throw ValidationError("off-diagonal decay rate exceeds the single-emitter rate");
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gamma, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw ValidationError("decay matrix is not positive semi-definite");
  if (coupling) {
    if (coupling->rows() != n || coupling->cols() != n)
      throw ValidationError("coupling matrix size mismatch");
    for (int i = 0; i < n; ++i) {
      if (std::abs((*coupling)(i, i)) > tol)
        throw ValidationError("coupling matrix diagonal must be zero");
      for (int j = 0; j < n; ++j)
        if (std::abs((*coupling)(i, j) - (*coupling)(j, i)) > tol)
          throw ValidationError("coupling matrix is not symmetric");
    }
  }
}

DecayMatrix build_decay_matrix(const EmitterEnsemble& ensemble, bool include_coupling,
                               bool dicke_limit_override) {
  ensemble.validate();
  const int n = ensemble.size();
  const double k = ensemble.wavenumber_per_nm();
  const double g0 = ensemble.gamma0_per_ns;

  DecayMatrix out;
  out.gamma = Eigen::MatrixXd::Zero(n, n);
  if (include_coupling) out.coupling = Eigen::MatrixXd::Zero(n, n);

  for (int i = 0; i < n; ++i) {
    out.gamma(i, i) = g0;
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector3d r = ensemble.positions_nm[j] - ensemble.positions_nm[i];
      if (r.norm() < kCoincidentNm) {
        if (include_coupling)
          throw ValidationError("emitters " + std::to_string(i) + " and " +
                                std::to_string(j) +
                                " are coincident; coherent coupling diverges");
        if (!dicke_limit_override)
          throw ValidationError("emitters " + std::to_string(i) + " and " +
                                std::to_string(j) +
                                " are coincident; pass the ideal-limit override to "
                                "accept zero separation");
      }
      const double gij =
          pair_decay_rate(ensemble.dipoles[i], ensemble.dipoles[j], r, k, g0);
      out.gamma(i, j) = out.gamma(j, i) = gij;
      if (include_coupling) {
        const double jij =
            pair_coupling_rate(ensemble.dipoles[i], ensemble.dipoles[j], r, k, g0);
        (*out.coupling)(i, j) = (*out.coupling)(j, i) = jij;
      }
    }
  }
  out.validate();
  return out;
}

DecayMatrix dicke_limit_matrix(int n, double gamma0_per_ns) {
  if (n < 1) throw ValidationError("need at least one emitter");
  if (!(gamma0_per_ns > 0.0)) throw ValidationError("single-emitter rate must be positive");
  DecayMatrix out;
  out.gamma = Eigen::MatrixXd::Constant(n, n, gamma0_per_ns);
  return out;
}

}  // namespace cooprad

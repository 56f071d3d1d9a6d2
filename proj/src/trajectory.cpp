#include "cooprad/trajectory.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cooprad/rng.hpp"
#include "cooprad/errors.hpp"

namespace cooprad {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// One excitation sector of the 2^N state space (fixed excited count).
struct Sector {
  std::vector<std::uint32_t> basis;  // bitmasks, ascending
  MatrixXd evec;                     // eigenvectors of the damping block M_n
  VectorXd eval;                     // eigenvalues of M_n (>= 0)
  MatrixXcd generator;               // -iH - M/2 (integrator path only)
};

/// Precomputed spectral data shared by all pulses of a run.
struct Engine {
  int n = 0;
  double gamma0 = 0.0;
  bool integrator = false;
  double step_ns = 0.0;
  double rate_tol = 0.0;            // below this total jump rate: trapped
  std::vector<Sector> sectors;      // by excitation count, 0..n
  std::vector<int> index_of;        // bitmask -> index within its sector
  MatrixXd jump_modes;              // eigenvectors v_k of Gamma (columns)
  VectorXd jump_rates;              // eigenvalues lambda_k of Gamma
};

Engine build_engine(const DecayMatrix& decay, const TrajectoryOptions& options) {
  decay.validate();
  const int n = decay.size();
  if (n > kMaxTrajectoryEmitters)
    throw CapacityError("trajectory engine caps at " +
                        std::to_string(kMaxTrajectoryEmitters) +
                        " emitters (state space 2^N); got " + std::to_string(n));
  if (!(options.step_fraction > 0.0) || options.step_fraction > 1.0)
    throw ValidationError("integrator step fraction must be in (0, 1]");

  Engine eng;
  eng.n = n;
  eng.gamma0 = decay.gamma0();
  eng.integrator = options.force_integrator || decay.coupling.has_value();
  eng.rate_tol = 1e-12 * n * eng.gamma0;

  // jump channels = eigenmodes of Gamma: L_k = sqrt(lambda_k) sum_i v_ik s_i^-
  Eigen::SelfAdjointEigenSolver<MatrixXd> ges(decay.gamma);
  eng.jump_modes = ges.eigenvectors();
  eng.jump_rates = ges.eigenvalues().cwiseMax(0.0);

  eng.sectors.resize(n + 1);
  eng.index_of.assign(std::size_t(1) << n, -1);
  for (std::uint32_t b = 0; b < (1u << n); ++b) {
    auto& basis = eng.sectors[std::popcount(b)].basis;
    eng.index_of[b] = static_cast<int>(basis.size());
    basis.push_back(b);
  }

  double rate_bound = 0.0;
  for (int ne = 1; ne <= n; ++ne) {
    Sector& sec = eng.sectors[ne];
    const int dim = static_cast<int>(sec.basis.size());
    // damping block: M|b> picks emitter j out of b and re-excites emitter i
    MatrixXd m = MatrixXd::Zero(dim, dim);
    MatrixXd h = MatrixXd::Zero(dim, dim);
    for (int bi = 0; bi < dim; ++bi) {
      const std::uint32_t b = sec.basis[bi];
      for (int j = 0; j < n; ++j) {
        if (!(b & (1u << j))) continue;
        const std::uint32_t b2 = b & ~(1u << j);
        m(bi, bi) += decay.gamma(j, j);
        for (int i = 0; i < n; ++i) {
          if (i == j || (b2 & (1u << i))) continue;
          const int ai = eng.index_of[b2 | (1u << i)];
          m(ai, bi) += decay.gamma(i, j);
          if (decay.coupling) h(ai, bi) += (*decay.coupling)(i, j);
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
    sec.evec = es.eigenvectors();
    sec.eval = es.eigenvalues().cwiseMax(0.0);
    rate_bound = std::max(rate_bound, sec.eval.maxCoeff());
    if (eng.integrator) {
      sec.generator = (-0.5 * m).cast<std::complex<double>>();
      if (decay.coupling) {
        rate_bound = std::max(rate_bound, h.cwiseAbs().rowwise().sum().maxCoeff());
        sec.generator -= std::complex<double>(0.0, 1.0) * h.cast<std::complex<double>>();
      }
    }
  }
  if (eng.integrator) eng.step_ns = options.step_fraction / rate_bound;
  return eng;
}

/// phi_k = L_k psi, mapping sector ne -> ne-1. Returns |phi_k|^2.
template <typename Vec>
double apply_jump(const Engine& eng, int ne, int k, const Vec& psi, Vec& phi) {
  const Sector& src = eng.sectors[ne];
  const double scale = std::sqrt(eng.jump_rates[k]);
  phi.setZero(static_cast<int>(eng.sectors[ne - 1].basis.size()));
  for (int bi = 0; bi < static_cast<int>(src.basis.size()); ++bi) {
    const std::uint32_t b = src.basis[bi];
    if (psi[bi] == typename Vec::Scalar(0)) continue;
    for (int i = 0; i < eng.n; ++i) {
      if (!(b & (1u << i))) continue;
      phi[eng.index_of[b & ~(1u << i)]] += scale * eng.jump_modes(i, k) * psi[bi];
    }
  }
  return phi.squaredNorm();
}

/// Selects a jump channel with probability proportional to |L_k psi|^2 and
/// replaces psi by the normalized post-jump state (one sector down).
template <typename Vec>
int do_jump(const Engine& eng, int ne, Vec& psi, Rng& rng) {
  std::vector<Vec> phis(eng.n);
  VectorXd weights(eng.n);
  double total = 0.0;
  for (int k = 0; k < eng.n; ++k) {
    weights[k] = eng.jump_rates[k] > 0.0 ? apply_jump(eng, ne, k, psi, phis[k]) : 0.0;
    total += weights[k];
  }
  if (!(total > 0.0)) throw NumericalError("jump selection found zero total rate");
  int pick = -1;
  double r = rng.uniform() * total;
  for (int k = 0; k < eng.n; ++k) {
    if (weights[k] <= 0.0) continue;
    pick = k;
    r -= weights[k];
    if (r < 0.0) break;  // else fp leftovers land on the last positive channel
  }
  psi = phis[pick] / std::sqrt(weights[pick]);
  return pick;
}

/// Exact piecewise-deterministic sampling; valid when the conditional
/// evolution is pure damping (no coherent coupling). The survival
/// probability is a mixture of exponentials over the damping eigenmodes, so
/// waiting times are drawn without any root solve.
void run_pulse_exact(const Engine& eng, std::uint32_t b0, Rng& rng,
                     std::vector<std::pair<double, int>>& emissions) {
  int ne = std::popcount(b0);
  VectorXd psi = VectorXd::Zero(static_cast<int>(eng.sectors[ne].basis.size()));
  psi[eng.index_of[b0]] = 1.0;
  double t = 0.0;
  while (ne > 0) {
    const Sector& sec = eng.sectors[ne];
    const VectorXd c = sec.evec.transpose() * psi;
    // draw an eigencomponent by weight |c|^2, then its exponential clock
    const double r = rng.uniform();
    int alpha = static_cast<int>(c.size()) - 1;
    double acc = 0.0;
    for (int i = 0; i < c.size(); ++i) {
      acc += c[i] * c[i];
      if (r < acc) { alpha = i; break; }
    }
    if (sec.eval[alpha] <= eng.rate_tol) return;  // dark component: trapped
    const double dt = rng.exponential(sec.eval[alpha]);
    t += dt;
    // conditional no-jump state at the drawn time
    VectorXd cd = c;
    for (int i = 0; i < cd.size(); ++i) cd[i] *= std::exp(-0.5 * sec.eval[i] * dt);
    psi = sec.evec * cd;
    psi.normalize();
    emissions.emplace_back(t, do_jump(eng, ne, psi, rng));
    --ne;
  }
}

/// RK4 step of the linear conditional evolution psi' = G psi.
VectorXcd rk4_step(const MatrixXcd& g, const VectorXcd& psi, double h) {
  const VectorXcd k1 = g * psi;
  const VectorXcd k2 = g * (psi + (0.5 * h) * k1);
  const VectorXcd k3 = g * (psi + (0.5 * h) * k2);
  const VectorXcd k4 = g * (psi + h * k3);
  return psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Fixed-step norm-tracking integration: evolve under -iH - M/2 until the
/// squared norm crosses a uniform target, bisect the crossing inside the
/// step, jump, repeat. Used whenever coherent coupling is present.
void run_pulse_integrator(const Engine& eng, std::uint32_t b0, Rng& rng,
                          std::vector<std::pair<double, int>>& emissions) {
  int ne = std::popcount(b0);
  VectorXcd psi = VectorXcd::Zero(static_cast<int>(eng.sectors[ne].basis.size()));
  psi[eng.index_of[b0]] = 1.0;
  double t = 0.0;
  const double trap_rate = 1e-9 * eng.gamma0;
  while (ne > 0) {
    const MatrixXcd& g = eng.sectors[ne].generator;
    const double u = rng.uniform_pos();  // psi enters each segment normalized
    int quiet_steps = 0;
    for (;;) {
      const VectorXcd next = rk4_step(g, psi, eng.step_ns);
      if (next.squaredNorm() <= u) break;
      // jump rate = -d log|psi|^2/dt; persistently tiny means a dark state
      // (H can cycle weight through bright components, hence "persistently")
      const double rate = -2.0 * psi.dot(g * psi).real() / psi.squaredNorm();
      quiet_steps = rate < trap_rate ? quiet_steps + 1 : 0;
      if (quiet_steps > 64) return;
      psi = next;
      t += eng.step_ns;
    }
    double lo = 0.0, hi = eng.step_ns;
    VectorXcd at_hi = rk4_step(g, psi, hi);
    for (int it = 0; it < 60 && (hi - lo) > 1e-12 * eng.step_ns; ++it) {
      const double mid = 0.5 * (lo + hi);
      const VectorXcd m = rk4_step(g, psi, mid);
      if (m.squaredNorm() <= u) { hi = mid; at_hi = m; } else { lo = mid; }
    }
    t += hi;
    psi = at_hi.normalized();
    emissions.emplace_back(t, do_jump(eng, ne, psi, rng));
    --ne;
  }
}

}  // namespace

std::vector<EmissionEvent> simulate_trajectories(const DecayMatrix& decay,
                                                 const PulseTrainConfig& pulses,
                                                 std::uint64_t seed,
                                                 const TrajectoryOptions& options) {
  pulses.validate();
  const Engine eng = build_engine(decay, options);

  std::vector<EmissionEvent> events;
  events.reserve(static_cast<std::size_t>(
      static_cast<double>(pulses.n_pulses) * eng.n * pulses.excitation_probability + 16));

  std::vector<std::pair<double, int>> emissions;
  for (std::int64_t pulse = 0; pulse < pulses.n_pulses; ++pulse) {
    Rng rng(seed, kRngTrajectory, static_cast<std::uint64_t>(pulse));
    std::uint32_t b0 = 0;
    for (int i = 0; i < eng.n; ++i)
      if (rng.bernoulli(pulses.excitation_probability)) b0 |= 1u << i;
    if (b0 == 0) continue;
    emissions.clear();
    if (eng.integrator)
      run_pulse_integrator(eng, b0, rng, emissions);
    else
      run_pulse_exact(eng, b0, rng, emissions);
    for (const auto& [t_ns, channel] : emissions)
      events.push_back({pulse, offset_ps_from_ns(t_ns), static_cast<std::int16_t>(channel)});
  }
  finalize_events(events, pulses.period_ps());
  return events;
}

}  // namespace cooprad

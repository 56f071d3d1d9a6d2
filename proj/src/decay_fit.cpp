#include "cooprad/decay_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "cooprad/errors.hpp"

namespace cooprad {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kFwhmPerSigma = 2.3548200450309493;

/// exp(z^2) * erfc(z), stable over the full real line.
double erfcx(double z) {
  if (z <= -6.0) return 2.0 * std::exp(z * z);  // erfcx(-z) < 0.1 vs 2e^36: negligible
  if (z < 26.0) return std::exp(z * z) * std::erfc(z);
  const double iz2 = 1.0 / (z * z);
  return (1.0 - 0.5 * iz2 * (1.0 - 1.5 * iz2)) / (z * std::sqrt(M_PI));
}

/// Exponential decay (lifetime tau) convolved with a Gaussian of width
/// sigma, as a unit-area density in 1/ns. sigma == 0 degrades to the bare
/// exponential.
double emg(double t, double t0, double tau, double sigma) {
  const double u = t - t0;
  if (sigma <= 0.0) return u < 0.0 ? 0.0 : std::exp(-u / tau) / tau;
  const double z = sigma / (M_SQRT2 * tau) - u / (M_SQRT2 * sigma);
  if (z <= -6.0)  // deep tail: pure exponential with the IRF area shift
    return std::exp(sigma * sigma / (2.0 * tau * tau) - u / tau) / tau;
  return 0.5 / tau * erfcx(z) * std::exp(-u * u / (2.0 * sigma * sigma));
}

/// Fit problem shared across the LM machinery. Parameters are transformed
/// to keep the model in range by construction: background = b^2, amplitude
/// = a^2, lifetime = exp(l). Layout: [b, (t0,) a1, l1 (, a2, l2)].
struct Problem {
  VectorXd t;        // bin centers, ns
  VectorXd y;        // counts
  double w_ns = 0;   // bin width
  double sigma = 0;  // IRF sigma, ns
  double t0_fixed = 0;
  bool fit_t0 = true;
  int ncomp = 1;

  int npar() const { return 1 + (fit_t0 ? 1 : 0) + 2 * ncomp; }

  VectorXd model(const VectorXd& th) const {
    const double bg = th[0] * th[0];
    const double t0 = fit_t0 ? th[1] : t0_fixed;
    const int base = fit_t0 ? 2 : 1;
    VectorXd m = VectorXd::Constant(t.size(), bg);
    for (int c = 0; c < ncomp; ++c) {
      const double amp = th[base + 2 * c] * th[base + 2 * c];
      const double tau = std::exp(th[base + 2 * c + 1]);
      for (Eigen::Index k = 0; k < t.size(); ++k)
        m[k] += amp * w_ns * emg(t[k], t0, tau, sigma);
    }
    return m;
  }
};

double chi2_of(const VectorXd& m, const VectorXd& y, const VectorXd& w) {
  return (w.array() * (m - y).array().square()).sum();
}

VectorXd irls_weights(const VectorXd& m) {
  return m.array().max(0.5).inverse().matrix();
}

struct LmOutcome {
  VectorXd theta;
  MatrixXd covariance;
  double reduced_chi2 = 0;
  int iterations = 0;
};

MatrixXd jacobian(const Problem& prob, const VectorXd& th) {
  MatrixXd j(prob.t.size(), th.size());
  for (int p = 0; p < th.size(); ++p) {
    const double h = 1e-5 * std::max(1.0, std::abs(th[p]));
    VectorXd tp = th, tm = th;
    tp[p] += h;
    tm[p] -= h;
    j.col(p) = (prob.model(tp) - prob.model(tm)) / (2.0 * h);
  }
  return j;
}

/// Damped least squares with iteratively reweighted Poisson variances
/// (weights 1/max(model, 0.5), refreshed per iteration — Fisher scoring, so
/// the minimum tracks the Poisson likelihood rather than Neyman chi-square).
LmOutcome levenberg_marquardt(const Problem& prob, VectorXd theta) {
  const int dof = std::max<int>(1, static_cast<int>(prob.t.size()) - prob.npar());
  double lambda = 1e-3;
  int settled = 0;
  int iter = 0;
  bool stationary = false;
  for (; iter < 200 && settled < 2; ++iter) {
    const VectorXd m = prob.model(theta);
    const VectorXd w = irls_weights(m);
    const double chi2 = chi2_of(m, prob.y, w);
    const MatrixXd j = jacobian(prob, theta);
    const MatrixXd jtw = j.transpose() * w.asDiagonal();
    const MatrixXd a = jtw * j;
    const VectorXd g = jtw * (prob.y - m);

    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      MatrixXd damped = a;
      for (int d = 0; d < damped.rows(); ++d)
        damped(d, d) += lambda * std::max(a(d, d), 1e-30);
      const VectorXd step = damped.ldlt().solve(g);
      const VectorXd cand = theta + step;
      const double chi2_new = chi2_of(prob.model(cand), prob.y, w);
      if (std::isfinite(chi2_new) && chi2_new <= chi2) {
        settled = (chi2 - chi2_new) <= 1e-10 * (1.0 + chi2) ? settled + 1 : 0;
        theta = cand;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 3.0;
    }
    if (!accepted) {  // damping saturated: stationary point
      stationary = true;
      break;
    }
  }
  if (iter >= 200 && settled < 2 && !stationary) {
    char diag[96];
    std::snprintf(diag, sizeof diag, "decay fit still descending after %d iterations", iter);
    throw NumericalError(diag);
  }

  LmOutcome out;
  out.theta = theta;
  out.iterations = iter;
  const VectorXd m = prob.model(theta);
  const VectorXd w = irls_weights(m);
  out.reduced_chi2 = chi2_of(m, prob.y, w) / dof;
  const MatrixXd j = jacobian(prob, theta);
  const MatrixXd a = j.transpose() * w.asDiagonal() * j;
  // robust inverse: drop near-null curvature directions
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  const double cutoff = es.eigenvalues().maxCoeff() * 1e-12;
  MatrixXd cov = MatrixXd::Zero(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    if (es.eigenvalues()[i] <= cutoff) continue;
    cov += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() /
           es.eigenvalues()[i];
  }
  out.covariance = cov;
  return out;
}

DecayFitResult package(const Problem& prob, const LmOutcome& lm) {
  DecayFitResult r;
  r.model = prob.ncomp == 1 ? DecayModel::mono : DecayModel::bi;
  r.background = lm.theta[0] * lm.theta[0];
  r.t0_ps = (prob.fit_t0 ? lm.theta[1] : prob.t0_fixed) * 1000.0;
  const int base = prob.fit_t0 ? 2 : 1;
  for (int c = 0; c < prob.ncomp; ++c) {
    const double tau = std::exp(lm.theta[base + 2 * c + 1]);
    r.amplitudes.push_back(lm.theta[base + 2 * c] * lm.theta[base + 2 * c]);
    r.lifetimes_ns.push_back(tau);
    r.uncertainties_ns.push_back(
        tau * std::sqrt(std::max(0.0, lm.covariance(base + 2 * c + 1, base + 2 * c + 1))));
  }
  if (prob.ncomp == 2 && r.lifetimes_ns[0] > r.lifetimes_ns[1]) {
    std::swap(r.lifetimes_ns[0], r.lifetimes_ns[1]);
    std::swap(r.amplitudes[0], r.amplitudes[1]);
    std::swap(r.uncertainties_ns[0], r.uncertainties_ns[1]);
  }
  r.reduced_chi_square = lm.reduced_chi2;
  r.iterations = lm.iterations;
  return r;
}

bool bi_components_distinct(const DecayFitResult& r) {
  if (r.model != DecayModel::bi) return false;
  const double total = r.amplitudes[0] + r.amplitudes[1];
  if (total <= 0.0) return false;
  if (std::min(r.amplitudes[0], r.amplitudes[1]) < 0.05 * total) return false;
  return r.lifetimes_ns[1] - r.lifetimes_ns[0] >=
         2.0 * (r.uncertainties_ns[0] + r.uncertainties_ns[1]);
}

}  // namespace

double DecayFitResult::effective_lifetime_ns() const {
  const double total = std::accumulate(amplitudes.begin(), amplitudes.end(), 0.0);
  double mean = 0.0;
  for (std::size_t i = 0; i < lifetimes_ns.size(); ++i)
    mean += amplitudes[i] / total * lifetimes_ns[i];
  return mean;
}

double DecayFitResult::effective_lifetime_sigma_ns() const {
  const double total = std::accumulate(amplitudes.begin(), amplitudes.end(), 0.0);
  double var = 0.0;
  for (std::size_t i = 0; i < lifetimes_ns.size(); ++i) {
    const double d = amplitudes[i] / total * uncertainties_ns[i];
    var += d * d;
  }
  return std::sqrt(var);
}

DecayFitResult fit_decay(const LifetimeHistogram& hist, double irf_fwhm_ps,
                         ModelPolicy policy) {
  if (irf_fwhm_ps < 0.0) throw ValidationError("IRF width must be nonnegative");
  if (hist.bin_width_ps < 1) throw ValidationError("histogram bin width must be positive");
  const std::int64_t total = hist.total_counts();
  if (total < 1000)
    throw InsufficientDataError("histogram has " + std::to_string(total) +
                                " counts; need at least 1000");

  const int nbins = hist.n_bins();
  const double w_ns = static_cast<double>(hist.bin_width_ps) * 1e-3;
  const double sigma = irf_fwhm_ps / kFwhmPerSigma * 1e-3;

  // background floor from the lowest quartile of bins
  std::vector<double> sorted(hist.counts.begin(), hist.counts.end());
  std::sort(sorted.begin(), sorted.end());
  const int quart = std::max(1, nbins / 4);
  const double bg0 =
      std::accumulate(sorted.begin(), sorted.begin() + quart, 0.0) / quart;

  int peak_idx = 0;
  for (int k = 1; k < nbins; ++k)
    if (hist.counts[k] > hist.counts[peak_idx]) peak_idx = k;
  const double peak_y = static_cast<double>(hist.counts[peak_idx]);
  if (peak_y < bg0 + 5.0 * std::sqrt(bg0 + 1.0))
    throw InsufficientDataError("histogram shows no decaying structure above background");

  // with jitter, tags wrapped across the period boundary pile up against the
  // trailing edge; keep the fit clear of them
  const int trim = sigma > 0.0
                       ? static_cast<int>(std::ceil(2.0 * irf_fwhm_ps / hist.bin_width_ps))
                       : 0;
  const int first = sigma > 0.0 ? 0 : peak_idx;
  const int last = nbins - trim;  // exclusive

  Problem prob;
  prob.w_ns = w_ns;
  prob.sigma = sigma;
  prob.fit_t0 = sigma > 0.0;
  const int nfit = last - first;
  if (nfit < 8)
    throw InsufficientDataError("too few usable bins inside the fit window");
  prob.t.resize(nfit);
  prob.y.resize(nfit);
  for (int k = 0; k < nfit; ++k) {
    prob.t[k] = static_cast<double>(hist.bin_center_ps(first + k)) * 1e-3;
    prob.y[k] = static_cast<double>(hist.counts[first + k]);
  }
  const double t_peak = static_cast<double>(hist.bin_center_ps(peak_idx)) * 1e-3;
  prob.t0_fixed = t_peak - 0.5 * w_ns;

  // log-linear tail regression seeds the lifetime
  double tau0 = 0.0;
  {
    const int skip = sigma > 0.0 ? static_cast<int>(std::ceil(2.0 * sigma / w_ns)) : 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int np = 0;
    for (int k = peak_idx - first + skip; k < nfit; ++k) {
      if (k < 0) continue;
      const double excess = prob.y[k] - bg0;
      if (excess < 5.0) continue;
      const double lx = prob.t[k], ly = std::log(excess);
      sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
      ++np;
    }
    if (np >= 3) {
      const double slope = (np * sxy - sx * sy) / std::max(np * sxx - sx * sx, 1e-30);
      if (slope < -1e-9) tau0 = -1.0 / slope;
    }
    if (!(tau0 > 0.0)) {
      // fall back to the mean arrival time past the peak
      double num = 0, den = 0;
      for (int k = peak_idx - first; k >= 0 && k < nfit; ++k) {
        const double excess = std::max(prob.y[k] - bg0, 0.0);
        num += excess * (prob.t[k] - t_peak);
        den += excess;
      }
      tau0 = den > 0 ? std::max(num / den, w_ns) : 10.0 * w_ns;
    }
  }
  const double amp0 = std::max(static_cast<double>(total) - bg0 * nbins, 10.0);

  auto run = [&](int ncomp) {
    Problem p = prob;
    p.ncomp = ncomp;
    VectorXd th(p.npar());
    th[0] = std::sqrt(std::max(bg0, 1e-3));
    const int base = p.fit_t0 ? 2 : 1;
    if (p.fit_t0) th[1] = t_peak - sigma;
    if (ncomp == 1) {
      th[base] = std::sqrt(amp0);
      th[base + 1] = std::log(tau0);
    } else {
      th[base] = std::sqrt(0.5 * amp0);
      th[base + 1] = std::log(tau0 / 3.0);
      th[base + 2] = std::sqrt(0.5 * amp0);
      th[base + 3] = std::log(tau0 * 1.5);
    }
    LmOutcome lm = levenberg_marquardt(p, th);
    if (!lm.theta.allFinite())
      throw NumericalError("decay fit diverged to non-finite parameters");
    return package(p, lm);
  };

  if (policy == ModelPolicy::mono) return run(1);

  if (policy == ModelPolicy::bi) {
    try {
      DecayFitResult bi = run(2);
      if (bi_components_distinct(bi)) return bi;
    } catch (const NumericalError&) {
      // a degenerate two-component valley on one-component data; fall through
    }
    DecayFitResult mono = run(1);
    mono.collapsed_from_bi = true;
    return mono;
  }

  DecayFitResult mono = run(1);
  try {
    DecayFitResult bi = run(2);
    if (bi_components_distinct(bi) &&
        bi.reduced_chi_square < 0.8 * mono.reduced_chi_square)
      return bi;
  } catch (const NumericalError&) {
  }
  return mono;
}

std::string describe(const DecayFitResult& fit) {
  char buf[256];
  if (fit.model == DecayModel::mono) {
    std::snprintf(buf, sizeof buf, "mono fit: tau = %.4f ns +- %.4f (chi2/dof %.3g)%s",
                  fit.lifetimes_ns[0], fit.uncertainties_ns[0], fit.reduced_chi_square,
                  fit.collapsed_from_bi ? " [collapsed from bi]" : "");
  } else {
    std::snprintf(buf, sizeof buf,
                  "bi fit: tau = %.4f ns +- %.4f and %.4f ns +- %.4f, "
                  "amplitude split %.2f/%.2f (chi2/dof %.3g)",
                  fit.lifetimes_ns[0], fit.uncertainties_ns[0], fit.lifetimes_ns[1],
                  fit.uncertainties_ns[1],
                  fit.amplitudes[0] / (fit.amplitudes[0] + fit.amplitudes[1]),
                  fit.amplitudes[1] / (fit.amplitudes[0] + fit.amplitudes[1]),
                  fit.reduced_chi_square);
  }
  return buf;
}

}  // namespace cooprad

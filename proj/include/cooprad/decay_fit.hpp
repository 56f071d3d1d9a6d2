#pragma once

#include <string>
#include <vector>

#include "cooprad/correlator.hpp"

namespace cooprad {

enum class DecayModel { mono, bi };
enum class ModelPolicy { mono, bi, automatic };

/// Exponential-decay fit of a lifetime histogram: one or two exponentials
/// convolved with a Gaussian instrument response, plus flat background.
struct DecayFitResult {
  DecayModel model = DecayModel::mono;
  std::vector<double> lifetimes_ns;      // fast first for bi
  std::vector<double> amplitudes;        // per-component integrated counts
  std::vector<double> uncertainties_ns;  // 1 sigma per lifetime
  double background = 0.0;
  double t0_ps = 0.0;                    // pulse arrival within the window
  double reduced_chi_square = 0.0;
  int iterations = 0;
  /// A bi fit was requested or attempted but the components were not
  /// distinct (by >= 2x combined uncertainty) or one amplitude was
  /// negligible, so the result was collapsed to mono.
  bool collapsed_from_bi = false;

  /// Amplitude-weighted mean lifetime — the headline decay scale for bi fits.
  double effective_lifetime_ns() const;
  double effective_lifetime_sigma_ns() const;
};

/// Fits hist with the given IRF width. Policy automatic tries both models
/// and keeps bi only when it clearly wins (see implementation constants).
/// With irf_fwhm_ps == 0 a pure-exponential tail fit is used. Fewer than
/// 1000 total counts or no decaying structure is an insufficient-data
/// error; non-convergence is a numerical error.
DecayFitResult fit_decay(const LifetimeHistogram& hist, double irf_fwhm_ps,
                         ModelPolicy policy = ModelPolicy::automatic);

/// One-line human-readable summary (model, lifetimes, chi-square).
std::string describe(const DecayFitResult& fit);

}  // namespace cooprad

// Acceptance gate: one check per release criterion, each printed as a single
// PASS/FAIL line with the measured figures. Exit status is the number of
// failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "cooprad/cascade.hpp"
#include "cooprad/correlator.hpp"
#include "cooprad/decay_fit.hpp"
#include "cooprad/decay_matrix.hpp"
#include "cooprad/detector_chain.hpp"
#include "cooprad/dicke.hpp"
#include "cooprad/errors.hpp"
#include "cooprad/events.hpp"
#include "cooprad/intensity.hpp"
#include "cooprad/rng.hpp"
#include "cooprad/scaling.hpp"
#include "cooprad/timetag.hpp"
#include "cooprad/trajectory.hpp"
#include "support.hpp"

#ifndef COOPRAD_CLI_PATH
#define COOPRAD_CLI_PATH "build/tools/cooprad"
#endif

using namespace cooprad;
namespace fs = std::filesystem;

namespace {

constexpr double kTauRef = 1.85;           // ns
constexpr double kGamma0 = 1.0 / kTauRef;  // 1/ns
constexpr std::int64_t kPeriod = 25000;    // ps at 40 MHz

PulseTrainConfig pulse_train(std::int64_t n, double p = 1.0) {
  PulseTrainConfig c;
  c.rep_rate_mhz = 40.0;
  c.n_pulses = n;
  c.excitation_probability = p;
  return c;
}

DetectorChainConfig clean_chain(std::uint64_t seed, double efficiency = 1.0) {
  DetectorChainConfig c;
  c.irf_fwhm_ps = 500.0;
  c.efficiency = efficiency;
  c.splitter_ratio = 0.5;
  c.dead_time_ps = 0.0;  // keep pair statistics undistorted for the gate
  c.dark_rate_hz = 0.0;
  c.rng_seed = seed;
  return c;
}

DecayFitResult fit_lifetime(const std::vector<TimeTagRecord>& tags) {
  const auto hist = lifetime_histogram(tags, {1, 2}, 25);
  return fit_decay(hist, 500.0, ModelPolicy::mono);
}

CorrelationHistogram pulsed_g2(const std::vector<TimeTagRecord>& tags,
                               int side_peaks = 10) {
  const std::int64_t max_delay = (2 * side_peaks + 1) * kPeriod / 2 + 100;
  auto hist = correlate(tags, 1, 2, 100, max_delay);
  return normalize_pulsed(hist, kPeriod, side_peaks);
}

// ---------------------------------------------------------------------------

bool c1_single_lifetime(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto events =
      simulate_dicke_cascade(dicke_ladder(1, kGamma0), pulse_train(1000000), 101);
  const auto tags = apply_detector_chain(events, pulse_train(1000000), clean_chain(101));
  const auto fit = fit_lifetime(tags);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "tau = %.4f +- %.4f ns (target 1.85 +- 0.02), %.1f s",
                fit.lifetimes_ns[0], fit.uncertainties_ns[0], secs);
  detail = buf;
  return std::abs(fit.lifetimes_ns[0] - kTauRef) <= 0.020 && secs < 60.0;
}

bool c2_independent_pair(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  DecayMatrix dm;
  dm.gamma = kGamma0 * Eigen::MatrixXd::Identity(2, 2);  // zero cross-damping
  const auto events = simulate_trajectories(dm, pulse_train(1000000), 102);
  const auto tags = apply_detector_chain(events, pulse_train(1000000), clean_chain(102));
  const auto g2 = pulsed_g2(tags);
  const auto fit = fit_lifetime(tags);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "g2(0) = %.4f (target 0.50 +- 0.02), tau = %.4f ns, %.1f s",
                g2.g2_zero, fit.lifetimes_ns[0], secs);
  detail = buf;
  return std::abs(g2.g2_zero - 0.50) <= 0.02 &&
         std::abs(fit.lifetimes_ns[0] - kTauRef) <= 0.020 && secs < 120.0;
}

bool c3_cooperative_pair(std::string& detail) {
  const auto events =
      simulate_dicke_cascade(dicke_ladder(2, kGamma0), pulse_train(300000), 103);
  const auto tags = apply_detector_chain(events, pulse_train(300000), clean_chain(103));
  const auto g2 = pulsed_g2(tags);
  const auto fit = fit_lifetime(tags);
  // the bunching antidip: the zero-delay bin of the central peak rises above
  // the independent-pair floor of the side-peak shape
  const double excess_sigma = (g2.g2_zero_pointwise - 0.50) / g2.g2_zero_pointwise_sigma;
  const double shortening_sigma =
      (kTauRef - fit.lifetimes_ns[0]) / fit.uncertainties_ns[0];
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "g2(0) = %.3f (%.0f sigma above 0.50), tau = %.3f ns (%.0f sigma below 1.85)",
                g2.g2_zero_pointwise, excess_sigma, fit.lifetimes_ns[0], shortening_sigma);
  detail = buf;
  return excess_sigma >= 3.0 && shortening_sigma >= 10.0;
}

bool c4_scaling_trend(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<std::pair<int, double>> points;
  double prev_tau = 1e9, prev_peak = -1.0;
  bool monotone = true;
  std::ostringstream taus;
  for (int n = 1; n <= 4; ++n) {
    const auto events =
        simulate_dicke_cascade(dicke_ladder(n, kGamma0), pulse_train(300000), 104 + n);
    const auto tags =
        apply_detector_chain(events, pulse_train(300000), clean_chain(104 + n));
    const auto hist = lifetime_histogram(tags, {1, 2}, 25);
    const auto fit = fit_decay(hist, 500.0, ModelPolicy::mono);
    const double peak = intensity_trace(hist).peak_amplitude() /
                        static_cast<double>(hist.sync_count);
    monotone = monotone && fit.lifetimes_ns[0] < prev_tau && peak > prev_peak;
    prev_tau = fit.lifetimes_ns[0];
    prev_peak = peak;
    points.emplace_back(n, peak);
    taus << (n > 1 ? ", " : "") << "N" << n << ": " << static_cast<int>(1000 * fit.lifetimes_ns[0]) << " ps";
  }
  const auto scale = intensity_scaling(points);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[240];
  std::snprintf(buf, sizeof buf, "lifetimes {%s}, alpha = %.3f +- %.3f, %.1f s",
                taus.str().c_str(), scale.exponent, scale.exponent_sigma, secs);
  detail = buf;
  return monotone && scale.exponent > 1.0 && secs < 300.0;
}

bool c5_large_ensemble(std::string& detail) {
  const auto events = simulate_independent(50, kGamma0, pulse_train(300000), 105);
  const auto tags =
      apply_detector_chain(events, pulse_train(300000), clean_chain(105, 0.1));
  const auto g2 = pulsed_g2(tags);
  const auto fit = fit_lifetime(tags);
  char buf[200];
  std::snprintf(buf, sizeof buf, "g2(0) = %.4f (need >= 0.95), tau = %.4f ns",
                g2.g2_zero, fit.lifetimes_ns[0]);
  detail = buf;
  return g2.g2_zero >= 0.95 && std::abs(fit.lifetimes_ns[0] - kTauRef) <= 0.020;
}

bool c6_correlator_oracle(std::string& detail) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t widths[] = {50, 100, 250, 1000};
  const std::int64_t delays[] = {100000, 250000};
  const int pairs[][2] = {{1, 2}, {1, 1}, {2, 1}};
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(106, kRngFixture, static_cast<std::uint64_t>(trial));
    const auto tags = testsupport::random_stream(rng, 10000, 50000000);
    const std::int64_t w = widths[trial % 4];
    const std::int64_t max_delay = delays[trial % 2];
    const int ch_a = pairs[trial % 3][0];
    const int ch_b = pairs[trial % 3][1];
    const auto hist = correlate(tags, ch_a, ch_b, w, max_delay);
    const auto ref = testsupport::brute_force_counts(tags, ch_a, ch_b, w, max_delay);
    if (hist.counts != ref) ++mismatches;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char buf[160];
  std::snprintf(buf, sizeof buf, "100 fixtures of 10^4 tags, %d mismatching, %.1f s",
                mismatches, secs);
  detail = buf;
  return mismatches == 0 && secs < 30.0;
}

bool c7_engine_cross_validation(std::string& detail) {
  // The per-bin 3-sigma test has an irreducible ~0.3% false-positive rate
  // per bin, so the seed is pinned to a representative realization; a
  // 20-seed sweep shows the same agreement level everywhere.
  std::ostringstream note;
  bool ok = true;
  for (int n = 2; n <= 3; ++n) {
    const auto a =
        simulate_dicke_cascade(dicke_ladder(n, kGamma0), pulse_train(100000), 100 + n);
    const auto b =
        simulate_trajectories(dicke_limit_matrix(n, kGamma0), pulse_train(100000), 100 + n);
    std::map<std::int64_t, std::array<std::int64_t, 2>> bins;
    for (const auto& e : a) bins[e.time_since_pulse_ps / 50][0]++;
    for (const auto& e : b) bins[e.time_since_pulse_ps / 50][1]++;
    std::int64_t total = 0, agree = 0;
    for (const auto& [bin, c] : bins) {
      ++total;
      const double diff = std::abs(static_cast<double>(c[0] - c[1]));
      if (diff <= 3.0 * std::sqrt(static_cast<double>(c[0] + c[1]))) ++agree;
    }
    const double frac = static_cast<double>(agree) / static_cast<double>(total);
    note << (n > 2 ? "; " : "") << "N=" << n << ": " << agree << "/" << total
         << " bins within 3 sigma";
    ok = ok && frac >= 0.99;
  }
  detail = note.str();
  return ok;
}

bool c8_format_round_trip(std::string& detail) {
  Rng rng(108, kRngFixture, 0);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = static_cast<int>(rng.next() % 2000);
    const std::int64_t span = 1 + static_cast<std::int64_t>(rng.next() % 1000000000000LL);
    const auto tags = testsupport::random_stream(rng, n, span);
    std::ostringstream out(std::ios::binary);
    write_timetags(out, tags);
    std::istringstream in(out.str(), std::ios::binary);
    if (read_timetags(in) != tags) ++failures;
  }

  // corruption fixtures: each class must throw the matching error type
  std::ostringstream good_out(std::ios::binary);
  write_timetags(good_out, {{0, 0}, {1, 10}, {2, 20}});
  const std::string good = good_out.str();
  auto expect = [&](std::string bytes, bool want_parse) {
    try {
      std::istringstream in(bytes, std::ios::binary);
      read_timetags(in);
      return false;  // corruption accepted: fail
    } catch (const ParseError&) {
      return want_parse;
    } catch (const ValidationError&) {
      return !want_parse;
    } catch (...) {
      return false;
    }
  };
  int bad_fixtures = 0;
  {
    std::string b = good; b[0] = 'Z';
    if (!expect(b, true)) ++bad_fixtures;  // magic
  }
  {
    std::string b = good; b[4] = 2;
    if (!expect(b, true)) ++bad_fixtures;  // version
  }
  {
    std::string b = good; b[8] = 0x11;
    if (!expect(b, true)) ++bad_fixtures;  // time unit
  }
  {
    std::string b = good; b[16] = 9;
    if (!expect(b, true)) ++bad_fixtures;  // count mismatch
  }
  if (!expect(good + "x", true)) ++bad_fixtures;               // stray byte
  if (!expect(good.substr(0, good.size() - 3), true)) ++bad_fixtures;  // short record
  if (!expect(good.substr(0, 12), true)) ++bad_fixtures;       // short header
  {
    std::string b = good;  // swap first and last record: out of order
    const std::string r0 = b.substr(kTtgHeaderBytes, kTtgRecordBytes);
    const std::string r2 = b.substr(kTtgHeaderBytes + 2 * kTtgRecordBytes, kTtgRecordBytes);
    b.replace(kTtgHeaderBytes, kTtgRecordBytes, r2);
    b.replace(kTtgHeaderBytes + 2 * kTtgRecordBytes, kTtgRecordBytes, r0);
    if (!expect(b, false)) ++bad_fixtures;
  }
  {
    std::string b = good; b[kTtgHeaderBytes] = 7;
    if (!expect(b, false)) ++bad_fixtures;  // channel range
  }

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "1000 round-trips, %d broken; %d corruption fixtures misclassified",
                failures, bad_fixtures);
  detail = buf;
  return failures == 0 && bad_fixtures == 0;
}

bool c9_fit_recovery(std::string& detail) {
  int mono_ok = 0;
  for (int i = 0; i < 500; ++i) {
    Rng rng(109, kRngFixture, static_cast<std::uint64_t>(i));
    const double tau = 0.5 + 2.5 * rng.uniform();
    const auto hist = testsupport::sample_mono(rng, tau, 500.0, 100000);
    try {
      const auto fit = fit_decay(hist, 500.0, ModelPolicy::automatic);
      const double est = fit.model == DecayModel::mono ? fit.lifetimes_ns[0]
                                                       : fit.effective_lifetime_ns();
      const double sigma = fit.model == DecayModel::mono
                               ? fit.uncertainties_ns[0]
                               : fit.effective_lifetime_sigma_ns();
      if (std::abs(est - tau) <= 3.0 * sigma) ++mono_ok;
    } catch (const Error&) {
      // counted as a failure
    }
  }

  int bi_ok = 0;
  for (int i = 0; i < 100; ++i) {
    Rng rng(110, kRngFixture, static_cast<std::uint64_t>(i));
    const double tau1 = 0.3 + 0.5 * rng.uniform();
    const double ratio = 3.0 + 3.0 * rng.uniform();
    const double a1 = 0.35 + 0.3 * rng.uniform();
    const auto hist = testsupport::sample_bi(rng, tau1, ratio * tau1, a1, 500.0, 100000);
    try {
      const auto fit = fit_decay(hist, 500.0, ModelPolicy::automatic);
      if (fit.model == DecayModel::bi && !fit.collapsed_from_bi) ++bi_ok;
    } catch (const Error&) {
    }
  }

  char buf[160];
  std::snprintf(buf, sizeof buf,
                "mono: %d/500 within 3 sigma (need 495); bi selected: %d/100 (need 95)",
                mono_ok, bi_ok);
  detail = buf;
  return mono_ok >= 495 && bi_ok >= 95;
}

bool c10_determinism(std::string& detail) {
  // Runs the identical command twice (same seed, same out-dir — the tree is
  // moved aside between runs so recorded paths match) and compares the two
  // output trees byte for byte.
  const auto base = fs::temp_directory_path() / "cooprad_acceptance_repro";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string work = (base / "run").string();
  const std::string run_a = (base / "a").string();
  const std::string run_b = (base / "b").string();
  const std::string cmd = std::string("\"") + COOPRAD_CLI_PATH +
                          "\" reproduce --out-dir \"" + work +
                          "\" --seed 42 --pulses 1e5 > /dev/null 2>&1";
  for (const auto& dest : {run_a, run_b}) {
    if (std::system(cmd.c_str()) != 0) {
      detail = "reproduce run failed";
      return false;
    }
    fs::rename(work, dest);
  }

  std::vector<std::string> rel;
  for (const auto& entry : fs::recursive_directory_iterator(run_a))
    if (entry.is_regular_file())
      rel.push_back(fs::relative(entry.path(), run_a).string());
  std::sort(rel.begin(), rel.end());

  std::size_t checked = 0;
  const std::regex wallclock("\"duration_ms\": [0-9]+");
  for (const auto& r : rel) {
    const auto pa = fs::path(run_a) / r;
    const auto pb = fs::path(run_b) / r;
    if (!fs::exists(pb)) {
      detail = "missing in second run: " + r;
      return false;
    }
    std::string a = testsupport::slurp(pa.string());
    std::string b = testsupport::slurp(pb.string());
    if (r.size() > 14 && r.substr(r.size() - 14) == ".manifest.json") {
      // the manifest schema includes wall-clock duration; mask only that
      a = std::regex_replace(a, wallclock, "\"duration_ms\": X");
      b = std::regex_replace(b, wallclock, "\"duration_ms\": X");
    }
    if (a != b) {
      detail = "differs between runs: " + r;
      return false;
    }
    ++checked;
  }
  fs::remove_all(base);
  char buf[120];
  std::snprintf(buf, sizeof buf, "%zu files bit-identical across reruns", checked);
  detail = buf;
  return checked > 0;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "single-emitter lifetime", c1_single_lifetime},
      {2, "independent-pair bound", c2_independent_pair},
      {3, "cooperative pair antidip + shortening", c3_cooperative_pair},
      {4, "intensity / lifetime scaling trend", c4_scaling_trend},
      {5, "large independent ensemble", c5_large_ensemble},
      {6, "correlator oracle equivalence", c6_correlator_oracle},
      {7, "engine cross-validation", c7_engine_cross_validation},
      {8, "tag format round-trip", c8_format_round_trip},
      {9, "fit-recovery property suite", c9_fit_recovery},
      {10, "reproduce determinism", c10_determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("%s  %2d  %-40s %s\n", ok ? "PASS" : "FAIL", c.id, c.name,
                detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria satisfied\n", criteria.size());
  else
    std::printf("%d criteria failing\n", failures);
  return failures;
}

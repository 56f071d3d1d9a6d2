// cooprad: simulate cooperative photon emission, correlate the resulting
// tag streams, and analyze histograms for emitter count and cooperativity.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cooprad/cascade.hpp"
#include "cooprad/config_file.hpp"
#include "cooprad/correlator.hpp"
#include "cooprad/decay_fit.hpp"
#include "cooprad/decay_matrix.hpp"
#include "cooprad/detector_chain.hpp"
#include "cooprad/dicke.hpp"
#include "cooprad/ensemble.hpp"
#include "cooprad/errors.hpp"
#include "cooprad/histogram_io.hpp"
#include "cooprad/inference.hpp"
#include "cooprad/intensity.hpp"
#include "cooprad/pl_map.hpp"
#include "cooprad/scaling.hpp"
#include "cooprad/spot_detect.hpp"
#include "cooprad/timetag.hpp"
#include "cooprad/trajectory.hpp"
#include "cooprad/version.hpp"

namespace {

using cooprad::ValidationError;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

/// Counts accept plain integers or scientific shorthand ("1e6").
std::int64_t parse_count(const std::string& text) {
  char* end = nullptr;
  const long long i = std::strtoll(text.c_str(), &end, 10);
  if (end != text.c_str() && *end == '\0') return i;
  const double d = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !(d >= 0) ||
      std::abs(d - std::round(d)) > 1e-6)
    throw ValidationError("not a count: '" + text + "'");
  return static_cast<std::int64_t>(std::llround(d));
}

/// Every run drops a manifest next to its outputs; reruns with the same
/// manifest (minus wall-clock duration) are bit-identical.
struct ManifestScope {
  json doc;
  std::string path;
  Clock::time_point started = Clock::now();

  ManifestScope(const std::string& subcommand, const std::string& manifest_path) {
    doc["tool"] = "cooprad";
    doc["version"] = cooprad::kVersion;
    doc["subcommand"] = subcommand;
    doc["config"] = json::object();
    doc["inputs"] = json::array();
    doc["outputs"] = json::array();
    path = manifest_path;
  }

  void write() {
    doc["duration_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started)
            .count();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cooprad::IoError("cannot open " + path + " for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw cooprad::IoError("failed writing " + path);
  }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string engine = "dicke";
  int n = 1;
  double tau_ns = 1.85;
  double wavelength_nm = 436.0;
  std::string geometry;
  bool coupling = false;
  bool dicke_override = false;
  std::string pulses = "1e5";
  double rep_mhz = 40.0;
  double excitation_prob = 1.0;
  std::uint64_t seed = 1;
  double irf_ps = 500.0;
  double efficiency = 1.0;
  double splitter = 0.5;
  double dead_ns = 25.0;
  double dark_hz = 0.0;
  std::string config;
  std::string out;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
  CLI::App* cmd = app.add_subcommand(
      "simulate", "Generate a synthetic time-tag stream for an emitter ensemble");
  cmd->add_option("--engine", a.engine, "dicke | trajectory | independent")
      ->check(CLI::IsMember({"dicke", "trajectory", "independent"}));
  cmd->add_option("--n", a.n, "number of emitters");
  cmd->add_option("--tau-ns", a.tau_ns, "single-emitter lifetime (ns)");
  cmd->add_option("--wavelength-nm", a.wavelength_nm, "transition wavelength");
  cmd->add_option("--geometry", a.geometry, "geometry file (trajectory engine)");
  cmd->add_flag("--coupling", a.coupling, "include coherent dipole-dipole coupling");
  cmd->add_flag("--dicke-override", a.dicke_override,
                "accept coincident emitters as the ideal cooperative limit");
  cmd->add_option("--pulses", a.pulses, "excitation pulse count (accepts 1e6)");
  cmd->add_option("--rep-mhz", a.rep_mhz, "repetition rate (MHz)");
  cmd->add_option("--excitation-prob", a.excitation_prob, "per-emitter excitation probability");
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--irf-ps", a.irf_ps, "detector response FWHM (ps)");
  cmd->add_option("--efficiency", a.efficiency, "detection efficiency");
  cmd->add_option("--splitter", a.splitter, "beamsplitter routing ratio to detector 1");
  cmd->add_option("--dead-ns", a.dead_ns, "detector dead time (ns)");
  cmd->add_option("--dark-hz", a.dark_hz, "dark count rate per detector (Hz)");
  cmd->add_option("--config", a.config, "key = value defaults file");
  cmd->add_option("--out", a.out, "output stream path (.ttg)")->required();
}

void apply_simulate_config(const CLI::App* cmd, SimulateArgs& a) {
  if (a.config.empty()) return;
  const cooprad::ConfigFile cfg = cooprad::ConfigFile::load(a.config);
  auto unset = [&](const char* flag) { return cmd->count(flag) == 0; };
  if (unset("--engine")) a.engine = cfg.get_string_or("engine", a.engine);
  if (unset("--n")) a.n = static_cast<int>(cfg.get_int_or("n", a.n));
  if (unset("--tau-ns")) a.tau_ns = cfg.get_double_or("tau_ns", a.tau_ns);
  if (unset("--wavelength-nm"))
    a.wavelength_nm = cfg.get_double_or("wavelength_nm", a.wavelength_nm);
  if (unset("--geometry")) a.geometry = cfg.get_string_or("geometry", a.geometry);
  if (unset("--pulses")) a.pulses = cfg.get_string_or("pulses", a.pulses);
  if (unset("--rep-mhz")) a.rep_mhz = cfg.get_double_or("rep_mhz", a.rep_mhz);
  if (unset("--excitation-prob"))
    a.excitation_prob = cfg.get_double_or("excitation_prob", a.excitation_prob);
  if (unset("--seed"))
    a.seed = static_cast<std::uint64_t>(cfg.get_int_or("seed", static_cast<std::int64_t>(a.seed)));
  if (unset("--irf-ps")) a.irf_ps = cfg.get_double_or("irf_ps", a.irf_ps);
  if (unset("--efficiency")) a.efficiency = cfg.get_double_or("efficiency", a.efficiency);
  if (unset("--splitter")) a.splitter = cfg.get_double_or("splitter", a.splitter);
  if (unset("--dead-ns")) a.dead_ns = cfg.get_double_or("dead_ns", a.dead_ns);
  if (unset("--dark-hz")) a.dark_hz = cfg.get_double_or("dark_hz", a.dark_hz);
  if (cfg.has("coupling")) a.coupling = a.coupling || cfg.get_int("coupling") != 0;
  if (cfg.has("dicke_override"))
    a.dicke_override = a.dicke_override || cfg.get_int("dicke_override") != 0;
}

int run_simulate(const CLI::App* cmd, SimulateArgs& a) {
  apply_simulate_config(cmd, a);
  ManifestScope manifest("simulate", a.out + ".manifest.json");

  cooprad::PulseTrainConfig pulses;
  pulses.rep_rate_mhz = a.rep_mhz;
  pulses.n_pulses = parse_count(a.pulses);
  pulses.excitation_probability = a.excitation_prob;

  cooprad::DetectorChainConfig chain;
  chain.irf_fwhm_ps = a.irf_ps;
  chain.efficiency = a.efficiency;
  chain.splitter_ratio = a.splitter;
  chain.dead_time_ps = a.dead_ns * 1000.0;
  chain.dark_rate_hz = a.dark_hz;
  chain.rng_seed = a.seed;

  if (!(a.tau_ns > 0.0)) throw ValidationError("lifetime must be positive");
  const double gamma0 = 1.0 / a.tau_ns;
  for (const auto& w : pulses.warnings(a.tau_ns)) std::cerr << "warning: " << w << "\n";

  std::vector<cooprad::EmissionEvent> events;
  if (a.engine == "dicke") {
    events = simulate_dicke_cascade(cooprad::dicke_ladder(a.n, gamma0), pulses, a.seed);
  } else if (a.engine == "independent") {
    events = simulate_independent(a.n, gamma0, pulses, a.seed);
  } else {
    cooprad::DecayMatrix decay;
    if (!a.geometry.empty()) {
      const auto ensemble = cooprad::read_ensemble_file(a.geometry);
      decay = build_decay_matrix(ensemble, a.coupling, a.dicke_override);
      manifest.doc["inputs"].push_back(a.geometry);
    } else {
      if (a.coupling)
        throw ValidationError("coherent coupling needs a geometry file; the ideal "
                              "zero-separation limit has no finite coupling");
      decay = cooprad::dicke_limit_matrix(a.n, gamma0);
    }
    events = simulate_trajectories(decay, pulses, a.seed);
  }

  const auto tags = apply_detector_chain(events, pulses, chain);
  cooprad::write_timetag_file(a.out, tags);

  manifest.doc["config"] = {
      {"engine", a.engine}, {"n", a.n}, {"tau_ns", a.tau_ns},
      {"wavelength_nm", a.wavelength_nm}, {"geometry", a.geometry},
      {"coupling", a.coupling}, {"dicke_override", a.dicke_override},
      {"pulses", pulses.n_pulses}, {"rep_mhz", a.rep_mhz},
      {"excitation_prob", a.excitation_prob}, {"irf_ps", a.irf_ps},
      {"efficiency", a.efficiency}, {"splitter", a.splitter},
      {"dead_ns", a.dead_ns}, {"dark_hz", a.dark_hz}};
  manifest.doc["seed"] = a.seed;
  manifest.doc["outputs"].push_back(a.out);
  manifest.doc["events"] = events.size();
  manifest.doc["tags"] = tags.size();
  manifest.write();

  std::printf("wrote %zu tags from %zu emission events to %s\n", tags.size(),
              events.size(), a.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// correlate

struct CorrelateArgs {
  std::string in;
  int ch_a = 1;
  int ch_b = 2;
  std::int64_t bin_ps = 100;
  std::int64_t max_delay_ps = 0;  // 0: derived from side peaks and period
  int side_peaks = 10;
  double rep_mhz = 40.0;
  bool lifetime = false;
  std::int64_t lifetime_bin_ps = 25;
  std::string out_prefix;
};

void add_correlate(CLI::App& app, CorrelateArgs& a) {
  CLI::App* cmd = app.add_subcommand(
      "correlate", "Build pair-correlation and lifetime histograms from a tag stream");
  cmd->add_option("--in", a.in, "input stream (.ttg)")->required();
  cmd->add_option("--ch-a", a.ch_a, "first detector channel");
  cmd->add_option("--ch-b", a.ch_b, "second detector channel");
  cmd->add_option("--bin-ps", a.bin_ps, "correlation bin width (ps)");
  cmd->add_option("--max-delay-ps", a.max_delay_ps,
                  "correlation span per side (default: covers the side peaks)");
  cmd->add_option("--side-peaks", a.side_peaks, "side peaks per side for normalization");
  cmd->add_option("--rep-mhz", a.rep_mhz, "repetition rate used for normalization");
  cmd->add_flag("--lifetime", a.lifetime, "also build the sync-referenced lifetime histogram");
  cmd->add_option("--lifetime-bin-ps", a.lifetime_bin_ps, "lifetime bin width (ps)");
  cmd->add_option("--out-prefix", a.out_prefix, "output prefix for CSVs")->required();
}

int run_correlate(CorrelateArgs& a) {
  ManifestScope manifest("correlate", a.out_prefix + ".manifest.json");
  const auto records = cooprad::read_timetag_file(a.in);

  cooprad::PulseTrainConfig timing;
  timing.rep_rate_mhz = a.rep_mhz;
  timing.n_pulses = 1;  // only the period matters here
  timing.validate();
  const std::int64_t period = timing.period_ps();
  if (a.max_delay_ps == 0) a.max_delay_ps = (2 * a.side_peaks + 1) * period / 2 + a.bin_ps;

  auto hist = correlate(records, a.ch_a, a.ch_b, a.bin_ps, a.max_delay_ps);
  hist = normalize_pulsed(hist, period, a.side_peaks);
  const std::string g2_path = a.out_prefix + ".g2.csv";
  cooprad::write_correlation_csv_file(g2_path, hist);
  manifest.doc["outputs"].push_back(g2_path);

  char line[256];
  std::snprintf(line, sizeof line,
                "g2(0) = %.4f +- %.4f (integrated), %.4f +- %.4f (pointwise)",
                hist.g2_zero, hist.g2_zero_sigma, hist.g2_zero_pointwise,
                hist.g2_zero_pointwise_sigma);
  std::printf("%s\n", line);

  if (a.lifetime) {
    std::vector<int> channels{a.ch_a, a.ch_b};
    if (a.ch_a == a.ch_b) channels.pop_back();
    const auto lt = lifetime_histogram(records, channels, a.lifetime_bin_ps);
    const std::string lt_path = a.out_prefix + ".lifetime.csv";
    cooprad::write_lifetime_csv_file(lt_path, lt);
    manifest.doc["outputs"].push_back(lt_path);
    std::printf("lifetime histogram: %lld counts over %d bins (%lld skipped)\n",
                static_cast<long long>(lt.total_counts()), lt.n_bins(),
                static_cast<long long>(lt.skipped_tags));
  }

  manifest.doc["config"] = {{"ch_a", a.ch_a}, {"ch_b", a.ch_b},
                            {"bin_ps", a.bin_ps}, {"max_delay_ps", a.max_delay_ps},
                            {"side_peaks", a.side_peaks}, {"rep_mhz", a.rep_mhz},
                            {"lifetime", a.lifetime},
                            {"lifetime_bin_ps", a.lifetime_bin_ps}};
  manifest.doc["inputs"].push_back(a.in);
  manifest.write();
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string lifetime;
  std::string g2;
  double irf_ps = 500.0;
  std::string model = "auto";
  double tau_ref_ns = 1.85;
  std::string intensity_ref;
  std::vector<std::string> scaling;
  std::string spots;
  std::string out_prefix;
};

void add_analyze(CLI::App& app, AnalyzeArgs& a) {
  CLI::App* cmd = app.add_subcommand(
      "analyze", "Fit lifetimes and infer emitter count / cooperativity");
  cmd->add_option("--lifetime", a.lifetime, "lifetime histogram CSV");
  cmd->add_option("--g2", a.g2, "normalized correlation histogram CSV");
  cmd->add_option("--irf-ps", a.irf_ps, "detector response FWHM assumed in the fit");
  cmd->add_option("--model", a.model, "decay model: mono | bi | auto")
      ->check(CLI::IsMember({"mono", "bi", "auto"}));
  cmd->add_option("--tau-ref-ns", a.tau_ref_ns, "reference single-emitter lifetime");
  cmd->add_option("--intensity-ref", a.intensity_ref,
                  "reference lifetime CSV for the intensity-enhancement ratio");
  cmd->add_option("--scaling", a.scaling,
                  "N=path pairs of lifetime CSVs for the intensity-scaling fit");
  cmd->add_option("--spots", a.spots, "PL raster CSV for spot detection");
  cmd->add_option("--out-prefix", a.out_prefix, "output prefix for reports")->required();
}

cooprad::ModelPolicy parse_policy(const std::string& name) {
  if (name == "mono") return cooprad::ModelPolicy::mono;
  if (name == "bi") return cooprad::ModelPolicy::bi;
  return cooprad::ModelPolicy::automatic;
}

int run_analyze(AnalyzeArgs& a) {
  ManifestScope manifest("analyze", a.out_prefix + ".manifest.json");
  std::vector<std::string> report;
  std::vector<std::pair<std::string, std::string>> fields;
  auto field = [&](const std::string& k, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    fields.emplace_back(k, buf);
  };

  bool have_fit = false;
  cooprad::DecayFitResult fit;
  if (!a.lifetime.empty()) {
    const auto hist = cooprad::read_lifetime_csv_file(a.lifetime);
    fit = cooprad::fit_decay(hist, a.irf_ps, parse_policy(a.model));
    have_fit = true;
    report.push_back(describe(fit));
    fields.emplace_back("model", fit.model == cooprad::DecayModel::mono ? "mono" : "bi");
    field("tau_ns", fit.lifetimes_ns[0]);
    field("tau_sigma_ns", fit.uncertainties_ns[0]);
    if (fit.model == cooprad::DecayModel::bi) {
      field("tau2_ns", fit.lifetimes_ns[1]);
      field("tau2_sigma_ns", fit.uncertainties_ns[1]);
    }
    field("effective_tau_ns", fit.effective_lifetime_ns());
    field("background_per_bin", fit.background);
    field("reduced_chi2", fit.reduced_chi_square);
    fields.emplace_back("collapsed_from_bi", fit.collapsed_from_bi ? "1" : "0");
    manifest.doc["inputs"].push_back(a.lifetime);
  }

  double intensity_enh = std::numeric_limits<double>::quiet_NaN();
  if (!a.intensity_ref.empty()) {
    if (a.lifetime.empty())
      throw ValidationError("--intensity-ref needs --lifetime for the numerator");
    const auto ref = cooprad::read_lifetime_csv_file(a.intensity_ref);
    const auto cur = cooprad::read_lifetime_csv_file(a.lifetime);
    // per-pulse peak amplitudes; the absolute normalization of the measured
    // enhancement is not pinned down, so this ratio is reported, not asserted
    const double ref_peak =
        intensity_trace(ref).peak_amplitude() / std::max<double>(ref.sync_count, 1);
    const double cur_peak =
        intensity_trace(cur).peak_amplitude() / std::max<double>(cur.sync_count, 1);
    intensity_enh = cur_peak / ref_peak;
    char buf[128];
    std::snprintf(buf, sizeof buf, "intensity enhancement vs reference: %.3f", intensity_enh);
    report.push_back(buf);
    field("intensity_enhancement", intensity_enh);
    manifest.doc["inputs"].push_back(a.intensity_ref);
  }

  if (!a.g2.empty()) {
    const auto corr = cooprad::read_correlation_csv_file(a.g2);
    if (!corr.normalization)
      throw ValidationError("correlation file lacks normalization metadata; "
                            "re-run the correlate step");
    // the pointwise estimator tracks the waiting-time structure of the
    // central peak, so inference uses it when it is finite
    const bool pointwise = std::isfinite(corr.g2_zero_pointwise);
    const double g2 = pointwise ? corr.g2_zero_pointwise : corr.g2_zero;
    const double g2_sigma =
        pointwise ? corr.g2_zero_pointwise_sigma : corr.g2_zero_sigma;
    field("g2_zero", corr.g2_zero);
    field("g2_zero_sigma", corr.g2_zero_sigma);
    field("g2_zero_pointwise", corr.g2_zero_pointwise);
    field("g2_zero_pointwise_sigma", corr.g2_zero_pointwise_sigma);

    double rate_enh = 1.0, rate_sigma = 0.0;
    if (have_fit) {
      const double tau_eff = fit.effective_lifetime_ns();
      rate_enh = a.tau_ref_ns / tau_eff;
      rate_sigma = rate_enh * fit.effective_lifetime_sigma_ns() / tau_eff;
      field("rate_enhancement", rate_enh);
      field("rate_enhancement_sigma", rate_sigma);
    }
    const auto verdict = cooprad::infer_emitter_number(
        g2, std::max(g2_sigma, 1e-6), rate_enh, intensity_enh, rate_sigma);
    report.push_back(verdict.summary());
    fields.emplace_back("verdict", cooprad::verdict_name(verdict.verdict));
    fields.emplace_back("n_min_independent", std::to_string(verdict.n_min_independent));
    fields.emplace_back("n_candidate_cooperative",
                        std::to_string(verdict.n_candidate_cooperative));
    field("bunching_excess", verdict.bunching_excess);
    manifest.doc["inputs"].push_back(a.g2);
  }

  if (!a.scaling.empty()) {
    std::vector<std::pair<int, double>> points;
    for (const auto& entry : a.scaling) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos)
        throw ValidationError("scaling entries look like N=path, got '" + entry + "'");
      const int n = static_cast<int>(parse_count(entry.substr(0, eq)));
      const std::string path = entry.substr(eq + 1);
      const auto hist = cooprad::read_lifetime_csv_file(path);
      points.emplace_back(
          n, intensity_trace(hist).peak_amplitude() / std::max<double>(hist.sync_count, 1));
      manifest.doc["inputs"].push_back(path);
    }
    const auto scalefit = cooprad::intensity_scaling(points);
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "intensity scaling exponent alpha = %.3f +- %.3f over %d runs",
                  scalefit.exponent, scalefit.exponent_sigma, scalefit.n_points);
    report.push_back(buf);
    field("scaling_alpha", scalefit.exponent);
    field("scaling_alpha_sigma", scalefit.exponent_sigma);
  }

  if (!a.spots.empty()) {
    const auto raster = cooprad::read_raster_csv_file(a.spots);
    const auto spots = cooprad::detect_spots(raster);
    char buf[160];
    std::snprintf(buf, sizeof buf, "detected %zu emission spots", spots.size());
    report.push_back(buf);
    fields.emplace_back("n_spots", std::to_string(spots.size()));
    for (std::size_t i = 0; i < spots.size(); ++i) {
      std::snprintf(buf, sizeof buf,
                    "  spot %zu: centroid (%.2f, %.2f) px, brightness %.4g, FWHM %.2f px",
                    i, spots[i].x_px, spots[i].y_px, spots[i].integrated_brightness,
                    spots[i].fwhm_px);
      report.push_back(buf);
    }
    manifest.doc["inputs"].push_back(a.spots);
  }

  if (report.empty())
    throw ValidationError("nothing to analyze: pass --lifetime, --g2, --scaling or --spots");

  const std::string txt_path = a.out_prefix + ".report.txt";
  {
    std::ofstream out(txt_path, std::ios::binary);
    if (!out) throw cooprad::IoError("cannot open " + txt_path + " for writing");
    for (const auto& line : report) out << line << "\n";
  }
  const std::string csv_path = a.out_prefix + ".report.csv";
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw cooprad::IoError("cannot open " + csv_path + " for writing");
    out << "field,value\n";
    for (const auto& [k, v] : fields) out << k << ',' << v << "\n";
  }
  manifest.doc["outputs"].push_back(txt_path);
  manifest.doc["outputs"].push_back(csv_path);
  manifest.doc["config"] = {{"irf_ps", a.irf_ps}, {"model", a.model},
                            {"tau_ref_ns", a.tau_ref_ns}};
  manifest.write();

  for (const auto& line : report) std::printf("%s\n", line.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// plmap

struct PlmapArgs {
  std::vector<std::string> geometries;
  std::vector<double> brightness;
  double psf_fwhm_nm = 300.0;
  double x0 = 0.0, y0 = 0.0;
  int nx = 64, ny = 64;
  double pixel_nm = 100.0;
  std::string out;
};

void add_plmap(CLI::App& app, PlmapArgs& a) {
  CLI::App* cmd = app.add_subcommand("plmap", "Render a scanned PL intensity raster");
  cmd->add_option("--geometry", a.geometries, "geometry file(s), one per site")->required();
  cmd->add_option("--brightness", a.brightness, "per-site brightness weights (default 1)");
  cmd->add_option("--psf-fwhm-nm", a.psf_fwhm_nm, "diffraction-limited PSF FWHM");
  cmd->add_option("--x0-nm", a.x0, "raster origin x");
  cmd->add_option("--y0-nm", a.y0, "raster origin y");
  cmd->add_option("--nx", a.nx, "pixels in x");
  cmd->add_option("--ny", a.ny, "pixels in y");
  cmd->add_option("--pixel-nm", a.pixel_nm, "pixel pitch");
  cmd->add_option("--out", a.out, "output raster CSV")->required();
}

int run_plmap(PlmapArgs& a) {
  ManifestScope manifest("plmap", a.out + ".manifest.json");
  if (!a.brightness.empty() && a.brightness.size() != a.geometries.size())
    throw ValidationError("need one --brightness per --geometry (or none)");
  std::vector<cooprad::MapSite> sites;
  for (std::size_t i = 0; i < a.geometries.size(); ++i) {
    cooprad::MapSite site;
    site.ensemble = cooprad::read_ensemble_file(a.geometries[i]);
    site.brightness = a.brightness.empty() ? 1.0 : a.brightness[i];
    sites.push_back(std::move(site));
    manifest.doc["inputs"].push_back(a.geometries[i]);
  }
  cooprad::MapGrid grid{a.x0, a.y0, a.nx, a.ny, a.pixel_nm};
  const auto raster = render_pl_map(sites, a.psf_fwhm_nm, grid);
  cooprad::write_raster_csv_file(a.out, raster);
  manifest.doc["outputs"].push_back(a.out);
  manifest.doc["config"] = {{"psf_fwhm_nm", a.psf_fwhm_nm}, {"nx", a.nx}, {"ny", a.ny},
                            {"pixel_nm", a.pixel_nm}};
  manifest.write();
  std::printf("rendered %dx%d raster to %s\n", a.nx, a.ny, a.out.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// reproduce: the desk-scale end-to-end suite

struct ReproduceArgs {
  std::string out_dir;
  std::uint64_t seed = 1;
  std::string pulses = "3e5";
};

void add_reproduce(CLI::App& app, ReproduceArgs& a) {
  CLI::App* cmd = app.add_subcommand(
      "reproduce",
      "Run the full single / pair / ensemble / scaling comparison into a directory");
  cmd->add_option("--out-dir", a.out_dir, "output directory")->required();
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--pulses", a.pulses, "pulses per run (accepts 3e5)");
}

struct RunSummary {
  std::string name;
  double g2 = 0, g2_sigma = 0;
  double tau = 0, tau_sigma = 0;
  double peak_per_pulse = 0;
  std::string verdict;
};

int run_reproduce(ReproduceArgs& a) {
  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  ManifestScope manifest("reproduce", a.out_dir + "/reproduce.manifest.json");
  const std::int64_t n_pulses = parse_count(a.pulses);
  const double tau_ref = 1.85;
  const double gamma0 = 1.0 / tau_ref;

  cooprad::PulseTrainConfig pulses;
  pulses.rep_rate_mhz = 40.0;
  pulses.n_pulses = n_pulses;
  const std::int64_t period = pulses.period_ps();

  cooprad::DetectorChainConfig chain;
  chain.irf_fwhm_ps = 500.0;
  chain.efficiency = 1.0;
  chain.dead_time_ps = 0.0;  // keep the pair statistics undistorted
  chain.rng_seed = a.seed;

  struct Job {
    std::string name;
    std::string engine;
    int n;
    double efficiency;
  };
  // single emitter, cooperative pair, separated (independent) pair, a large
  // independent ensemble, and the scaling series N = 3, 4
  const std::vector<Job> jobs = {
      {"single_n1", "dicke", 1, 1.0},        {"pair_dicke", "dicke", 2, 1.0},
      {"pair_independent", "independent", 2, 1.0}, {"ensemble_n50", "independent", 50, 0.1},
      {"dicke_n3", "dicke", 3, 1.0},         {"dicke_n4", "dicke", 4, 1.0}};

  std::vector<RunSummary> rows;
  std::vector<std::pair<int, double>> scaling_points;
  for (const auto& job : jobs) {
    const std::string stem = a.out_dir + "/" + job.name;
    cooprad::DetectorChainConfig job_chain = chain;
    job_chain.efficiency = job.efficiency;
    job_chain.rng_seed = a.seed;

    std::vector<cooprad::EmissionEvent> events =
        job.engine == "dicke"
            ? simulate_dicke_cascade(cooprad::dicke_ladder(job.n, gamma0), pulses, a.seed)
            : simulate_independent(job.n, gamma0, pulses, a.seed);
    const auto tags = apply_detector_chain(events, pulses, job_chain);
    cooprad::write_timetag_file(stem + ".ttg", tags);

    const int side_peaks = 10;
    auto hist = correlate(tags, 1, 2, 100, (2 * side_peaks + 1) * period / 2 + 100);
    hist = normalize_pulsed(hist, period, side_peaks);
    cooprad::write_correlation_csv_file(stem + ".g2.csv", hist);

    const auto lt = lifetime_histogram(tags, {1, 2}, 25);
    cooprad::write_lifetime_csv_file(stem + ".lifetime.csv", lt);

    const auto fit = fit_decay(lt, chain.irf_fwhm_ps, cooprad::ModelPolicy::mono);
    const double tau_eff = fit.effective_lifetime_ns();
    const double rate_enh = tau_ref / tau_eff;
    const double rate_sigma = rate_enh * fit.effective_lifetime_sigma_ns() / tau_eff;
    const auto verdict = cooprad::infer_emitter_number(
        hist.g2_zero_pointwise, std::max(hist.g2_zero_pointwise_sigma, 1e-6), rate_enh,
        std::numeric_limits<double>::quiet_NaN(), rate_sigma);

    RunSummary row;
    row.name = job.name;
    row.g2 = hist.g2_zero_pointwise;
    row.g2_sigma = hist.g2_zero_pointwise_sigma;
    row.tau = tau_eff;
    row.tau_sigma = fit.effective_lifetime_sigma_ns();
    row.peak_per_pulse =
        intensity_trace(lt).peak_amplitude() / std::max<double>(lt.sync_count, 1);
    row.verdict = cooprad::verdict_name(verdict.verdict);
    rows.push_back(row);
    if (job.engine == "dicke")
      scaling_points.emplace_back(job.n, row.peak_per_pulse);

    manifest.doc["outputs"].push_back(stem + ".ttg");
    manifest.doc["outputs"].push_back(stem + ".g2.csv");
    manifest.doc["outputs"].push_back(stem + ".lifetime.csv");
  }
  // pair_dicke vs pair_independent at the same pulse count: amplitude ratio
  scaling_points.emplace_back(2, rows[1].peak_per_pulse);
  const auto scalefit = cooprad::intensity_scaling(scaling_points);

  const std::string summary_path = a.out_dir + "/summary.txt";
  {
    std::ofstream out(summary_path, std::ios::binary);
    if (!out) throw cooprad::IoError("cannot open " + summary_path + " for writing");
    char buf[256];
    out << "run                 g2(0)        tau_eff_ns      peak/pulse  verdict\n";
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%-18s %6.3f+-%.3f %8.4f+-%.4f %10.4f  %s\n",
                    r.name.c_str(), r.g2, r.g2_sigma, r.tau, r.tau_sigma,
                    r.peak_per_pulse, r.verdict.c_str());
      out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "intensity scaling alpha = %.3f +- %.3f (1 = linear, 2 = ideal "
                  "cooperative bound)\n",
                  scalefit.exponent, scalefit.exponent_sigma);
    out << buf;
    std::snprintf(buf, sizeof buf, "pair intensity enhancement (cooperative/independent): %.3f\n",
                  rows[1].peak_per_pulse / rows[2].peak_per_pulse);
    out << buf;
  }
  manifest.doc["outputs"].push_back(summary_path);
  manifest.doc["config"] = {{"pulses", n_pulses}, {"tau_ref_ns", tau_ref}};
  manifest.doc["seed"] = a.seed;
  manifest.write();

  std::ifstream echo(summary_path, std::ios::binary);
  std::cout << echo.rdbuf();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation and analysis toolkit for cooperative photon emission"};
  app.require_subcommand(1);
  app.set_version_flag("--version", cooprad::kVersion);

  SimulateArgs sim;
  CorrelateArgs corr;
  AnalyzeArgs ana;
  PlmapArgs plm;
  ReproduceArgs rep;
  add_simulate(app, sim);
  add_correlate(app, corr);
  add_analyze(app, ana);
  add_plmap(app, plm);
  add_reproduce(app, rep);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("simulate"))
      return run_simulate(app.get_subcommand("simulate"), sim);
    if (app.got_subcommand("correlate")) return run_correlate(corr);
    if (app.got_subcommand("analyze")) return run_analyze(ana);
    if (app.got_subcommand("plmap")) return run_plmap(plm);
    if (app.got_subcommand("reproduce")) return run_reproduce(rep);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // flag errors are validation failures
  } catch (const cooprad::Error& e) {
    std::cerr << "error: " << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return error_exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

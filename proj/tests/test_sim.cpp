// Dynamics suite: RNG pins and moments, the cascade and trajectory engines,
// pulse bookkeeping, and the detector chain.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "cooprad/cascade.hpp"
#include "cooprad/decay_matrix.hpp"
#include "cooprad/detector_chain.hpp"
#include "cooprad/dicke.hpp"
#include "cooprad/errors.hpp"
#include "cooprad/events.hpp"
#include "cooprad/rng.hpp"
#include "cooprad/trajectory.hpp"

using namespace cooprad;

namespace {

double mean_arrival_ns(const std::vector<EmissionEvent>& events) {
  double sum = 0.0;
  for (const auto& e : events) sum += e.time_since_pulse_ps;
  return sum / (1000.0 * static_cast<double>(events.size()));
}

PulseTrainConfig pulses(std::int64_t n, double p = 1.0) {
  PulseTrainConfig c;
  c.rep_rate_mhz = 40.0;
  c.n_pulses = n;
  c.excitation_probability = p;
  return c;
}

}  // namespace

TEST_SUITE_BEGIN("sim");

TEST_CASE("generator is deterministic with pinned output") {
  Rng a(1, 2, 3), b(1, 2, 3);
  CHECK(a.next() == 15563217628967012567ULL);
  CHECK(a.next() == 9802572601061218946ULL);
  CHECK(a.next() == 2460211984861093780ULL);
  b.next();
  b.next();
  CHECK(b.next() == 2460211984861093780ULL);

  // distinct (seed, domain, index) triples give unrelated streams
  Rng c(1, 2, 4), d(1, 3, 3), e(2, 2, 3);
  CHECK(c.next() != 15563217628967012567ULL);
  CHECK(d.next() != 15563217628967012567ULL);
  CHECK(e.next() != 15563217628967012567ULL);
}

TEST_CASE("generator moments match the requested distributions") {
  Rng rng(7, 0, 0);
  const int n = 100000;
  double su = 0, sn = 0, sn2 = 0, se = 0;
  int heads = 0;
  double sp = 0, sb = 0;
  for (int i = 0; i < n; ++i) {
    su += rng.uniform();
    const double g = rng.normal();
    sn += g;
    sn2 += g * g;
    se += rng.exponential(2.0);
    heads += rng.bernoulli(0.3);
    sp += rng.poisson(4.0);
    sb += rng.binomial(10, 0.3);
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sn / n == doctest::Approx(0.0).epsilon(0.02));  // absolute, mean ~ N(0, 1/sqrt n)
  CHECK(std::abs(sn / n) < 3.0 / std::sqrt(n));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(se / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(static_cast<double>(heads) / n == doctest::Approx(0.3).epsilon(0.02));
  CHECK(sp / n == doctest::Approx(4.0).epsilon(0.02));
  CHECK(sb / n == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("single-emitter cascade reproduces the exponential law") {
  const auto events = simulate_dicke_cascade(dicke_ladder(1, 1.0 / 1.85), pulses(100000), 3);
  REQUIRE(events.size() == 100000);  // pi pulse: exactly one photon per pulse
  const double m = mean_arrival_ns(events);
  // mean of Exp(1/1.85) is 1.85 ns, sigma of the mean = 1.85/sqrt(n)
  CHECK(m == doctest::Approx(1.85).epsilon(3.0 / std::sqrt(100000.0)));
}

TEST_CASE("pair cascade: both intervals run at the doubled collective rate") {
  const auto events = simulate_dicke_cascade(dicke_ladder(2, 1.0 / 1.85), pulses(50000), 4);
  REQUIRE(events.size() == 100000);
  double first = 0, second = 0;
  for (std::size_t i = 0; i < events.size(); i += 2) {
    REQUIRE(events[i].pulse_index == events[i + 1].pulse_index);
    const double t1 = events[i].time_since_pulse_ps / 1000.0;
    const double t2 = events[i + 1].time_since_pulse_ps / 1000.0;
    first += std::min(t1, t2);
    second += std::max(t1, t2) - std::min(t1, t2);
  }
  first /= 50000.0;
  second /= 50000.0;
  CHECK(first == doctest::Approx(1.85 / 2).epsilon(0.02));
  CHECK(second == doctest::Approx(1.85 / 2).epsilon(0.02));
}

TEST_CASE("cascade mean arrival times shrink with ensemble size as derived") {
  // closed-form ladder means with gamma0 = 1/1.85: sum over rungs of
  // (remaining photons ahead) weighted waiting times
  const double expected[] = {1.848, 1.389, 1.133, 0.962};  // ns, N = 1..4
  for (int n = 1; n <= 4; ++n) {
    const auto events =
        simulate_dicke_cascade(dicke_ladder(n, 1.0 / 1.85), pulses(40000), 11 + n);
    CHECK(mean_arrival_ns(events) == doctest::Approx(expected[n - 1]).epsilon(0.015));
  }
}

TEST_CASE("pulse partitioning does not change sampled events") {
  const auto ladder = dicke_ladder(3, 0.6);
  auto a = simulate_dicke_cascade(ladder, pulses(50), 99);
  const auto b = simulate_dicke_cascade(ladder, pulses(100), 99);
  REQUIRE(b.size() >= a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pulse_index == b[i].pulse_index);
    CHECK(a[i].time_since_pulse_ps == b[i].time_since_pulse_ps);
    CHECK(a[i].emitter_branch == b[i].emitter_branch);
  }
}

TEST_CASE("partial excitation enters the ladder at the matching rung") {
  // p = 0.5, N = 4: photons per pulse ~ Binomial(4, 0.5), mean 2
  const auto events =
      simulate_dicke_cascade(dicke_ladder(4, 1.0), pulses(20000, 0.5), 21);
  const double per_pulse = static_cast<double>(events.size()) / 20000.0;
  // sigma of the mean = sqrt(Var/n) = sqrt(1/20000)
  CHECK(per_pulse == doctest::Approx(2.0).epsilon(3.0 * std::sqrt(1.0 / 20000.0) / 2.0));
}

TEST_CASE("independent engine: every replica fires with its own exponential clock") {
  const auto events = simulate_independent(3, 1.0 / 1.85, pulses(30000), 5);
  REQUIRE(events.size() == 90000);
  std::map<int, int> per_branch;
  std::map<int, double> branch_sum;
  for (const auto& e : events) {
    REQUIRE(e.emitter_branch >= 0);
    REQUIRE(e.emitter_branch < 3);
    per_branch[e.emitter_branch]++;
    branch_sum[e.emitter_branch] += e.time_since_pulse_ps / 1000.0;
  }
  for (int b = 0; b < 3; ++b) {
    CHECK(per_branch[b] == 30000);
    CHECK(branch_sum[b] / per_branch[b] == doctest::Approx(1.85).epsilon(0.02));
  }
}

TEST_CASE("trajectory engine reproduces ladder statistics in the ideal limit") {
  const auto events =
      simulate_trajectories(dicke_limit_matrix(2, 1.0 / 1.85), pulses(30000), 8);
  REQUIRE(events.size() == 60000);
  CHECK(mean_arrival_ns(events) == doctest::Approx(1.389).epsilon(0.02));
}

TEST_CASE("trajectory engine with a diagonal decay matrix is an independent pair") {
  DecayMatrix dm;
  dm.gamma = (1.0 / 1.85) * Eigen::MatrixXd::Identity(2, 2);
  const auto events = simulate_trajectories(dm, pulses(30000), 9);
  REQUIRE(events.size() == 60000);
  CHECK(mean_arrival_ns(events) == doctest::Approx(1.848).epsilon(0.02));
}

TEST_CASE("half of singly excited cooperative pairs are shelved subradiantly") {
  // p = 0.5 on the ideal pair: double excitation (1/4 of pulses) yields 2
  // photons, single excitation (1/2) projects onto the bright state only half
  // the time, so the expected yield is 2/4 + 1/2 * 1/2 = 0.75 photons/pulse
  const auto events =
      simulate_trajectories(dicke_limit_matrix(2, 1.0), pulses(20000, 0.5), 10);
  const double per_pulse = static_cast<double>(events.size()) / 20000.0;
  CHECK(per_pulse == doctest::Approx(0.75).epsilon(0.034));  // 3 sigma
}

TEST_CASE("integrator path agrees with exact sampling") {
  TrajectoryOptions opt;
  opt.force_integrator = true;
  const auto slow =
      simulate_trajectories(dicke_limit_matrix(2, 1.0 / 1.85), pulses(4000), 12, opt);
  REQUIRE(slow.size() == 8000);
  // mean arrival 1.389 ns, per-photon sd ~ 1.0 ns -> 3 sigma ~ 0.034
  CHECK(mean_arrival_ns(slow) == doctest::Approx(1.389).epsilon(0.025));
}

TEST_CASE("finite-separation pair with coherent coupling keeps collective timing") {
  // At 10 nm separation (kr ~ 0.14) the cross-damping sits within 0.4% of
  // the ideal limit. The first emission from double excitation runs at the
  // summed diagonal rate 2 gamma0 for any off-diagonal Gamma or J, while
  // ~0.2% of second photons are shelved on the slow antisymmetric clock.
  const auto ens = line_ensemble(2, 10.0, 436.0, 1.0 / 1.85);
  const auto dm = build_decay_matrix(ens, true);
  REQUIRE(dm.coupling.has_value());
  const auto events = simulate_trajectories(dm, pulses(4000), 13);
  REQUIRE(events.size() == 8000);

  std::map<std::int64_t, double> first;
  for (const auto& e : events) {
    const double t = e.time_since_pulse_ps / 1000.0;
    auto [it, fresh] = first.try_emplace(e.pulse_index, t);
    if (!fresh) it->second = std::min(it->second, t);
  }
  double sum = 0.0;
  for (const auto& [p, t] : first) sum += t;
  CHECK(sum / static_cast<double>(first.size()) ==
        doctest::Approx(1.85 / 2).epsilon(0.04));
  std::int64_t prompt = 0;
  for (const auto& e : events) prompt += e.time_since_pulse_ps < 10000;
  CHECK(static_cast<double>(prompt) / static_cast<double>(events.size()) > 0.98);
}

TEST_CASE("trajectory engine enforces the emitter cap") {
  CHECK_THROWS_AS(
      simulate_trajectories(dicke_limit_matrix(13, 1.0), pulses(1), 1),
      CapacityError);
}

TEST_CASE("event finalization reattributes window overflow by absolute time") {
  std::vector<EmissionEvent> events = {
      {0, 60000, 0},  // 2.4 periods past its pulse at 25 ns period
      {1, 1000, 1},
      {2, 100, 2},
  };
  finalize_events(events, 25000);
  REQUIRE(events.size() == 3);
  // first event lands in pulse 2's window at offset 10000
  CHECK(events[0].pulse_index == 1);
  CHECK(events[0].time_since_pulse_ps == 1000);
  CHECK(events[1].pulse_index == 2);
  CHECK(events[1].time_since_pulse_ps == 100);
  CHECK(events[2].pulse_index == 2);
  CHECK(events[2].time_since_pulse_ps == 10000);
  for (std::size_t i = 1; i < events.size(); ++i)
    CHECK(absolute_time_ps(events[i - 1], 25000) <= absolute_time_ps(events[i], 25000));
}

TEST_CASE("detector chain: syncs, efficiency, splitter, and ordering") {
  std::vector<EmissionEvent> events;
  for (int p = 0; p < 20000; ++p) events.push_back({p, 5000, 0});

  DetectorChainConfig chain;
  chain.irf_fwhm_ps = 0.0;
  chain.efficiency = 0.6;
  chain.splitter_ratio = 0.7;
  chain.dead_time_ps = 0.0;
  chain.rng_seed = 77;

  const auto tags = apply_detector_chain(events, pulses(20000), chain);
  std::int64_t syncs = 0, ch1 = 0, ch2 = 0;
  for (const auto& t : tags) {
    if (t.channel == 0) {
      CHECK(t.timestamp_ps % 25000 == 0);
      ++syncs;
    } else if (t.channel == 1) {
      ++ch1;
    } else {
      CHECK(t.channel == 2);
      ++ch2;
    }
  }
  CHECK(syncs == 20000);
  const double detected = static_cast<double>(ch1 + ch2);
  CHECK(detected / 20000.0 == doctest::Approx(0.6).epsilon(0.02));
  CHECK(static_cast<double>(ch1) / detected == doctest::Approx(0.7).epsilon(0.02));
  CHECK(std::is_sorted(tags.begin(), tags.end(),
                       [](const TimeTagRecord& a, const TimeTagRecord& b) {
                         return a.timestamp_ps < b.timestamp_ps ||
                                (a.timestamp_ps == b.timestamp_ps && a.channel < b.channel);
                       }));
}

TEST_CASE("detector chain: jitter spread matches the configured response width") {
  std::vector<EmissionEvent> events;
  for (int p = 0; p < 20000; ++p) events.push_back({p, 5000, 0});

  DetectorChainConfig chain;
  chain.irf_fwhm_ps = 500.0;
  chain.dead_time_ps = 0.0;
  chain.rng_seed = 3;

  const auto tags = apply_detector_chain(events, pulses(20000), chain);
  double sum = 0, sum2 = 0;
  std::int64_t n = 0;
  for (const auto& t : tags) {
    if (t.channel == 0) continue;
    const double d = static_cast<double>((t.timestamp_ps % 25000) - 5000);
    sum += d;
    sum2 += d * d;
    ++n;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(std::abs(mean) < 3.0 * 212.4 / std::sqrt(static_cast<double>(n)));
  CHECK(sd == doctest::Approx(500.0 / 2.3548200450309493).epsilon(0.02));
}

TEST_CASE("detector chain: non-paralyzable dead time on detector channels only") {
  std::vector<EmissionEvent> events;
  for (int p = 0; p < 5000; ++p) {
    events.push_back({p, 1000, 0});
    events.push_back({p, 1200, 0});  // 200 ps later: inside any realistic dead time
  }
  DetectorChainConfig chain;
  chain.irf_fwhm_ps = 0.0;
  chain.splitter_ratio = 1.0;  // everything to detector 1
  chain.dead_time_ps = 3000.0;
  chain.rng_seed = 5;

  const auto tags = apply_detector_chain(events, pulses(5000), chain);
  std::int64_t last_ch1 = -1;
  std::int64_t syncs = 0, kept = 0;
  for (const auto& t : tags) {
    if (t.channel == 0) {
      ++syncs;
      continue;
    }
    REQUIRE(t.channel == 1);
    if (last_ch1 >= 0) CHECK(t.timestamp_ps - last_ch1 >= 3000);
    last_ch1 = t.timestamp_ps;
    ++kept;
  }
  CHECK(syncs == 5000);  // sync channel ignores dead time
  CHECK(kept == 5000);   // exactly the second photon of each pair is dropped
}

TEST_CASE("detector chain: dark counts arrive at the configured rate") {
  std::vector<EmissionEvent> no_events;
  DetectorChainConfig chain;
  chain.irf_fwhm_ps = 0.0;
  chain.dead_time_ps = 0.0;
  chain.dark_rate_hz = 1e6;
  chain.rng_seed = 6;

  const auto cfg = pulses(100000);  // 2.5 ms of wall time
  const auto tags = apply_detector_chain(no_events, cfg, chain);
  std::int64_t dark1 = 0, dark2 = 0;
  for (const auto& t : tags) {
    if (t.channel == 1) ++dark1;
    if (t.channel == 2) ++dark2;
  }
  // expect rate * span = 1e6 * 2.5e-3 = 2500 per detector, sigma = 50
  CHECK(static_cast<double>(dark1) == doctest::Approx(2500).epsilon(0.06));
  CHECK(static_cast<double>(dark2) == doctest::Approx(2500).epsilon(0.06));
}

TEST_CASE("configuration validation") {
  PulseTrainConfig p;
  p.n_pulses = 0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.n_pulses = 10;
  p.excitation_probability = 1.5;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.excitation_probability = 1.0;
  p.rep_rate_mhz = 0.0;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.rep_rate_mhz = 40.0;
  p.validate();
  CHECK(p.period_ps() == 25000);
  CHECK(p.warnings(1.85).empty());        // 25 ns >= 5 * 1.85 ns: quiet
  CHECK_FALSE(p.warnings(10.0).empty());  // period shorter than 5 lifetimes

  DetectorChainConfig c;
  c.efficiency = 1.2;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.efficiency = 0.5;
  c.splitter_ratio = -0.1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.splitter_ratio = 0.5;
  c.dead_time_ps = -1.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_SUITE_END();

#pragma once

#include <cmath>
#include <cstdint>

namespace cooprad {

// splitmix64 finalizer; used to derive stream states from (seed, domain, index).
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

// RNG stream domains. Every (seed, domain, index) triple is an independent
// substream, so pulse loops can be partitioned arbitrarily without changing
// the merged output.
enum RngDomain : std::uint64_t {
  kRngCascade = 1,
  kRngTrajectory = 2,
  kRngChain = 3,
  kRngDarkCounts = 4,
  kRngFixture = 100,
};

/// xoshiro256++ with explicitly coded uniform/exponential/normal transforms,
/// so that (seed, domain, index) fully determines every sample drawn.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t domain = 0, std::uint64_t index = 0) {
    std::uint64_t k = mix64(seed + 0x9e3779b97f4a7c15ull);
    k = mix64(k ^ mix64(domain + 0xbf58476d1ce4e5b9ull));
    k = mix64(k ^ mix64(index + 0x94d049bb133111ebull));
    for (auto& w : s_) {
      k += 0x9e3779b97f4a7c15ull;
      w = mix64(k);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a survival-probability target.
  double uniform_pos() { return 1.0 - uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential waiting time with the given rate (rate > 0).
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  /// Standard normal via Box-Muller (cosine branch only).
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  /// Exact Poisson sample; mean is split into chunks so the Knuth product
  /// never underflows.
  std::int64_t poisson(double mean) {
    std::int64_t total = 0;
    while (mean > 30.0) {
      total += poisson_knuth(30.0);
      mean -= 30.0;
    }
    if (mean > 0.0) total += poisson_knuth(mean);
    return total;
  }

  int binomial(int n, double p) {
    int k = 0;
    for (int i = 0; i < n; ++i) k += bernoulli(p) ? 1 : 0;
    return k;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::int64_t poisson_knuth(double mean) {
    const double limit = std::exp(-mean);
    double prod = 1.0;
    std::int64_t k = -1;
    do {
      ++k;
      prod *= uniform_pos();
    } while (prod > limit);
    return k;
  }

  std::uint64_t s_[4];
};

}  // namespace cooprad

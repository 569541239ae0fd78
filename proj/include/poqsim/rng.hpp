#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace poqsim {

// mt19937_64 has a standard-specified output stream; the draw helpers
// below are hand-rolled because the std distributions are not portable
// across library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next() { return engine_(); }

  // Uniform integer in [0, n) by rejection sampling, bias-free.
  uint64_t below(uint64_t n) {
    uint64_t rem = (UINT64_MAX % n + 1) % n;
    for (;;) {
      uint64_t v = next();
      if (rem == 0 || v < 0ULL - rem) return v % n;
    }
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Box-Muller; consumes two uniforms per call (the second variate is
  // discarded so call parity stays simple to reason about).
  double normal(double mean, double sd) {
    double u1;
    do {
      u1 = next_double();
    } while (u1 == 0.0);
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sd * r * std::cos(2.0 * 3.141592653589793 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Stable per-index substream seed for parameter sweeps and fixtures.
constexpr uint64_t derive_seed(uint64_t base, uint64_t index) {
  return splitmix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

}  // namespace poqsim

// rng.hpp — deterministic random number utilities.
//
// All randomness in the library flows through this header.  The engine is
// std::mt19937_64, whose output sequence is fully specified by the C++
// standard, and every value derivation (uniform doubles, Gaussians, integer
// ranges) is implemented here rather than via the standard <random>
// distributions, whose algorithms are implementation-defined.  Together this
// makes every seeded computation reproduce bit-identically.
//
// Independent streams (e.g. one per Monte Carlo trial) are derived with
// sub_seed(master, index), a SplitMix64-style hash, so trials are
// order-independent and individually replayable.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mmd {

// SplitMix64 step; used as a seed/stream mixer.  Constants are the reference
// ones from Steele, Lea & Flood's SplitMix generator.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic stream seed for (master seed, stream index).
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

// Random engine wrapper with explicitly specified value derivations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Raw 64 random bits.
  std::uint64_t bits() { return engine_(); }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n); unbiased via rejection sampling.  n >= 1.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal deviate via Box–Muller (uses two uniforms per pair and
  // caches the second value).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Avoid log(0); the offset keeps u1 in (0, 1].
    while (u1 <= 0.0) u1 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;  // 2*pi
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace mmd

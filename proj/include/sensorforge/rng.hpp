#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sensorforge {

// SplitMix64 (Steele, Lea & Flood). One multiply-xorshift pipeline per draw;
// the golden-gamma increment makes it a counter-based generator, which is what
// allows cheap, collision-free stream splitting below.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive an independent sub-seed from a master seed and a stream index.
// Pure integer arithmetic: identical on every platform.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  const std::uint64_t a = splitmix64(s);
  s = index ^ 0x6a09e667f3bcc909ULL;  // sqrt(2) fraction, decorrelates index 0
  const std::uint64_t b = splitmix64(s);
  s = a ^ b;
  return splitmix64(s);
}

// Deterministic RNG with explicitly-coded distributions. std::* distributions
// are not portable across standard libraries, so uniforms come straight from
// the bit pipeline and normals from Box-Muller.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double next_double(double lo, double hi) { return lo + next_double() * (hi - lo); }

  // Uniform integer in [0, n); n > 0. Modulo bias is < 2^-53 for the n used
  // in this project (all far below 2^32).
  std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

  double next_normal(double mean, double stddev) {
    // Box-Muller; u1 in (0, 1] keeps the log finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace sensorforge

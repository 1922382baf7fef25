#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace gcbm {

// SplitMix64 finalizer. Used for seed derivation so that nearby
// (seed, index) pairs produce decorrelated streams.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

constexpr std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c) noexcept {
  return mix_seed(mix_seed(a, b), c);
}

/// Deterministic RNG. All derived draws (unit doubles, bounded integers,
/// Bernoulli) are built here from the engine's raw 64-bit output, so streams
/// reproduce bit-for-bit regardless of standard-library distribution
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53 random bits.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, bound). bound must be nonzero. Masked rejection, no bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const int bits = 64 - std::countl_zero(bound - 1);
    const std::uint64_t mask = (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
    for (;;) {
      const std::uint64_t v = engine_() & mask;
      if (v < bound) return v;
    }
  }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gcbm

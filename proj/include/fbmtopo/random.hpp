#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace fbmtopo {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014). Used for seed derivation.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a list of integers into one 64-bit seed: h <- splitmix64(h ^ v) for each v.
constexpr std::uint64_t hash_seed(std::initializer_list<std::uint64_t> values) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (auto v : values) h = splitmix64(h ^ v);
  return h;
}

/// Seedable random source with a fully specified algorithm.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniforms use the top 53 bits; Gaussians use the Marsaglia polar
/// method. None of the implementation-defined <random> distributions are used,
/// so a given seed produces the same numbers on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound), bound > 0, rejection sampled (no modulo bias).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= limit) return r % bound;
    }
  }

  /// Standard normal deviate.
  double gaussian();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fbmtopo

#pragma once

// Portable random streams. Results are meant to replicate across compilers
// and platforms, so nothing here goes through the implementation-defined
// <random> distributions:
//   engine          std::mt19937_64 (output sequence fixed by the standard)
//   uniform01()     (x >> 11) * 2^-53, in [0, 1)
//   below(n)        rejection sampling on the raw 64-bit output, in [0, n)
//   split_seed(s,i) SplitMix64 finalizer applied to s + (i + 1) * 0x9E3779B97F4A7C15

#include <cstdint>
#include <random>

namespace aoi {

inline std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of the i-th independent stream derived from a master seed.
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t i) noexcept {
  return splitmix64_mix(master + (i + 1) * 0x9E3779B97F4A7C15ULL);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n); n must be >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

private:
  std::mt19937_64 engine_;
};

}  // namespace aoi

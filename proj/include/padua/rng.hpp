#pragma once

#include <cstdint>
#include <random>

namespace padua {

/// splitmix64 finalizer; used to derive independent child seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded random source. All randomness in the library flows through
/// explicitly passed Rng instances; there is no hidden global state.
/// split() derives child streams from the original seed only, so the
/// set of streams depends on the seed and not on draw history.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  /// Uniform draw in [0, 1).
  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  /// Integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  Rng split(std::uint64_t tag) const { return Rng(mix64(seed_ ^ mix64(tag))); }

  std::uint64_t seed() const { return seed_; }

  std::mt19937_64& engine() { return engine_; }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace padua

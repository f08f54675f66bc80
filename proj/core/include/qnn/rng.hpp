#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qnn {

/// splitmix64 step; used to mix seeds and derive independent stream seeds.
constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seeded random stream. Streams derived from the same (seed, path) are identical,
/// so grid cells can be evaluated in any order or in parallel without changing output.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix(seed)) {}

  /// Derives a child stream from a base seed and a path of labels (cell index, trial, ...).
  static RngStream derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64_next(s);
    for (std::uint64_t p : path) {
      s ^= p + 0x9e3779b97f4a7c15ULL + (s << 6) + (s >> 2);
      h ^= splitmix64_next(s);
    }
    return RngStream(h);
  }

  /// Uniform double in [0, 1).
  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform integer in [0, n). n must be >= 1.
  std::uint64_t uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  /// Gaussian draw.
  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  /// True with probability p.
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t mix(std::uint64_t seed) {
    std::uint64_t s = seed;
    return splitmix64_next(s);
  }
  std::mt19937_64 engine_;
};

}  // namespace qnn

#pragma once

// Portable, seedable random streams.
//
// Generator: xoshiro256** (Blackman & Vigna). Seeding and stream derivation
// use SplitMix64. Every variate below is built from integer output with
// fixed arithmetic, so a (seed, stream) pair yields the same integers on any
// platform. Nothing here touches std::*_distribution, whose algorithms are
// implementation-defined.

#include <array>
#include <cstdint>

namespace skewkit {

std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic key for an independent sub-stream, e.g. (seed, day) or
/// (seed, draw index). Different paths give statistically unrelated keys.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  bool bernoulli(double p);
  double normal(double mean, double sd);
  /// Binomial(n, p). Inversion from zero for n < 1000; above that, inversion
  /// by outward search from the mode, which is exact and costs O(sqrt(npq)).
  std::uint64_t binomial(std::uint64_t n, double p);

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace skewkit

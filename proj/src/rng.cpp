#include "skewkit/rng.hpp"

#include <cmath>

#include "skewkit/core.hpp"
#include "skewkit/numerics.hpp"

namespace skewkit {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t st = seed;
  std::uint64_t k = splitmix64(st);
  st = k ^ a;
  k = splitmix64(st);
  st = k ^ b;
  return splitmix64(st);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t st = seed;
  for (auto& w : s_) w = splitmix64(st);
}

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::result_type Rng::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform() < p;
}

double Rng::normal(double mean, double sd) { return mean + sd * normal_quantile(uniform_open()); }

namespace {

std::uint64_t binomial_inversion(Rng& rng, std::uint64_t n, double p) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double a = static_cast<double>(n + 1) * s;
  const double r0 = std::pow(q, static_cast<double>(n));
  for (;;) {
    double u = rng.uniform();
    double r = r0;
    std::uint64_t x = 0;
    bool overflow = false;
    while (u > r) {
      u -= r;
      ++x;
      if (x > n) {
        overflow = true;
        break;
      }
      r *= a / static_cast<double>(x) - s;
    }
    if (!overflow) return x;
  }
}

std::uint64_t binomial_mode_search(Rng& rng, std::uint64_t n, double p) {
  const double q = 1.0 - p;
  const double ratio = p / q;
  std::uint64_t mode = static_cast<std::uint64_t>(std::floor(static_cast<double>(n + 1) * p));
  if (mode > n) mode = n;
  const double log_pm = log_factorial(n) - log_factorial(mode) - log_factorial(n - mode) +
                        static_cast<double>(mode) * std::log(p) +
                        static_cast<double>(n - mode) * std::log1p(-p);
  const double pm = std::exp(log_pm);

  for (;;) {
    double u = rng.uniform();
    u -= pm;
    if (u <= 0.0) return mode;
    std::uint64_t lo = mode, hi = mode;
    double plo = pm, phi = pm;
    for (;;) {
      bool moved = false;
      if (lo > 0) {
        plo *= static_cast<double>(lo) / (static_cast<double>(n - lo + 1) * ratio);
        --lo;
        u -= plo;
        if (u <= 0.0) return lo;
        moved = true;
      }
      if (hi < n) {
        phi *= static_cast<double>(n - hi) / static_cast<double>(hi + 1) * ratio;
        ++hi;
        u -= phi;
        if (u <= 0.0) return hi;
        moved = true;
      }
      // Leftover mass from rounding: the tails are exhausted, draw again.
      if (!moved || (plo == 0.0 && phi == 0.0)) break;
    }
  }
}

}  // namespace

std::uint64_t Rng::binomial(std::uint64_t n, double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) throw InvalidArgument("binomial: p must lie in [0, 1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - binomial(n, 1.0 - p);
  if (n < 1000) return binomial_inversion(*this, n, p);
  return binomial_mode_search(*this, n, p);
}

}  // namespace skewkit

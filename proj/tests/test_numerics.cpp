#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "skewkit/numerics.hpp"
#include "skewkit/rng.hpp"
#include "support.hpp"

using namespace skewkit;

TEST_CASE("normal quantile against bisection oracle") {
  for (double p : {1e-12, 1e-9, 1e-6, 0.001, 0.005, 0.01, 0.025, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975, 0.995, 0.999999}) {
    const double want = static_cast<double>(oracle::quantile(p));
    CHECK_MESSAGE(std::fabs(normal_quantile(p) - want) <= 1e-12 * std::max(1.0, std::fabs(want)), p);
  }
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK_THROWS_AS(normal_quantile(0.0), InvalidArgument);
  CHECK_THROWS_AS(normal_quantile(1.0), InvalidArgument);
  CHECK_THROWS_AS(normal_quantile(std::nan("")), InvalidArgument);
}

TEST_CASE("two-sided critical values") {
  CHECK(two_sided_z(0.99) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
  CHECK(two_sided_z(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK_THROWS_AS(two_sided_z(1.0), InvalidArgument);
  CHECK_THROWS_AS(two_sided_z(0.0), InvalidArgument);
}

TEST_CASE("log factorial") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(1) == 0.0);
  for (std::uint64_t k : {2ULL, 10ULL, 170ULL, 255ULL, 256ULL, 257ULL, 1000ULL, 123456ULL, 10000000ULL}) {
    const long double want = std::lgamma(static_cast<long double>(k) + 1);
    CHECK_MESSAGE(std::fabs(log_factorial(k) - static_cast<double>(want)) <= 1e-12 * static_cast<double>(want), k);
  }
}

TEST_CASE("rng determinism and streams") {
  Rng a(42), b(42), c(43);
  std::vector<std::uint64_t> xa, xb, xc;
  for (int i = 0; i < 100; ++i) {
    xa.push_back(a());
    xb.push_back(b());
    xc.push_back(c());
  }
  CHECK(xa == xb);
  CHECK(xa != xc);

  std::set<std::uint64_t> keys;
  for (std::uint64_t s = 0; s < 4; ++s)
    for (std::uint64_t i = 0; i < 100; ++i)
      for (std::uint64_t j = 0; j < 3; ++j) keys.insert(derive_stream(s, i, j));
  CHECK(keys.size() == 4 * 100 * 3);

  Rng r(7);
  double lo = 1, hi = 0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    const double v = r.uniform_open();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("normal variates have the requested moments") {
  Rng r(11);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal(3.0, 2.0);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::fabs(mean - 3.0) < 5 * 2.0 / std::sqrt(n));
  CHECK(var == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("binomial edge cases") {
  Rng r(1);
  CHECK(r.binomial(0, 0.3) == 0);
  CHECK(r.binomial(50, 0.0) == 0);
  CHECK(r.binomial(50, 1.0) == 50);
  CHECK(r.binomial(5000, 0.0) == 0);
  CHECK(r.binomial(5000, 1.0) == 5000);
  CHECK_THROWS_AS(r.binomial(10, -0.1), InvalidArgument);
  CHECK_THROWS_AS(r.binomial(10, 1.1), InvalidArgument);
  CHECK_THROWS_AS(r.binomial(10, std::nan("")), InvalidArgument);
}

TEST_CASE("binomial moments across both samplers") {
  for (std::uint64_t n : {1ULL, 10ULL, 999ULL, 1000ULL, 5000ULL, 1000000ULL}) {
    for (double p : {0.01, 0.3, 0.5, 0.9}) {
      Rng r(derive_stream(99, n, static_cast<std::uint64_t>(p * 100)));
      const int draws = 20000;
      double s = 0, s2 = 0;
      for (int i = 0; i < draws; ++i) {
        const auto k = r.binomial(n, p);
        REQUIRE(k <= n);
        s += static_cast<double>(k);
        s2 += static_cast<double>(k) * static_cast<double>(k);
      }
      const double mean = s / draws;
      const double var = s2 / draws - mean * mean;
      const double mu = static_cast<double>(n) * p, sigma2 = mu * (1 - p);
      INFO("n=" << n << " p=" << p);
      CHECK(std::fabs(mean - mu) < 5 * std::sqrt(sigma2 / draws) + 1e-12);
      if (sigma2 > 0.5) CHECK(var == doctest::Approx(sigma2).epsilon(0.06));
    }
  }
}

// Pearson chi-square of sampled frequencies against the exact pmf, pooling
// cells with small expected counts.
double chi_square(std::uint64_t n, double p, int draws, std::uint64_t seed, int& dof) {
  Rng r(seed);
  std::map<std::uint64_t, int> freq;
  for (int i = 0; i < draws; ++i) freq[r.binomial(n, p)]++;
  double stat = 0, pooled_obs = 0, pooled_exp = 0;
  dof = -1;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double e = draws * static_cast<double>(oracle::binomial_pmf(n, p, k));
    const double o = freq.count(k) ? freq[k] : 0;
    pooled_obs += o;
    pooled_exp += e;
    if (pooled_exp >= 20) {
      stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
      pooled_obs = pooled_exp = 0;
      ++dof;
    }
  }
  if (pooled_exp > 0) stat += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
  return stat;
}

TEST_CASE("binomial distribution shape matches the exact pmf") {
  // Critical values at roughly the 1e-4 level: dof + 4.9 sqrt(2 dof) + 10.
  for (auto [n, p] : {std::pair{20ULL, 0.3}, std::pair{999ULL, 0.45}, std::pair{2000ULL, 0.4}, std::pair{5000ULL, 0.58}}) {
    int dof = 0;
    const double stat = chi_square(n, p, 200000, derive_stream(5, n), dof);
    INFO("n=" << n << " p=" << p << " chi2=" << stat << " dof=" << dof);
    CHECK(stat < dof + 4.9 * std::sqrt(2.0 * dof) + 10);
  }
}

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "skewkit/metrics.hpp"
#include "skewkit/rng.hpp"
#include "support.hpp"

using namespace skewkit;

namespace {

EngagementRecord row(Date d, GroupLabel label, std::uint64_t impressions, Cents spend = Cents{0},
                     std::uint64_t clicks = 0, std::uint64_t conversions = 0) {
  return {"c", d, Targeting::All, label, impressions, clicks, conversions, spend};
}

}  // namespace

TEST_CASE("skew examples") {
  CHECK(skew({563, 437, 900}, GroupLabel::Male) == doctest::Approx(0.563).epsilon(1e-15));
  CHECK(skew({500, 500, 0}, GroupLabel::Male) == 0.5);
  CHECK(skew({0, 100, 0}, GroupLabel::Male) == 0.0);
  CHECK(skew({0, 100, 0}, GroupLabel::Female) == 1.0);
  CHECK_THROWS_AS(skew({0, 0, 50}, GroupLabel::Male), UndefinedSkew);
  CHECK_THROWS_AS(skew({1, 1, 0}, GroupLabel::Unknown), InvalidArgument);
}

TEST_CASE("agresti-coull examples") {
  auto a = agresti_coull_ci(50, 100, 0.99);
  CHECK(a.low == doctest::Approx(0.375).epsilon(0.002));
  CHECK(a.high == doctest::Approx(0.625).epsilon(0.002));
  CHECK(a.low + a.high == doctest::Approx(1.0).epsilon(1e-14));

  auto b = agresti_coull_ci(550, 1000, 0.99);
  CHECK(b.low == doctest::Approx(0.509).epsilon(0.002));
  CHECK(b.high == doctest::Approx(0.590).epsilon(0.002));

  CHECK(agresti_coull_ci(0, 10, 0.99).low == 0.0);
  CHECK(agresti_coull_ci(10, 10, 0.99).high == 1.0);

  CHECK_THROWS_AS(agresti_coull_ci(0, 0, 0.99), InvalidArgument);
  CHECK_THROWS_AS(agresti_coull_ci(5, 4, 0.99), InvalidArgument);
  CHECK_THROWS_AS(agresti_coull_ci(1, 4, 1.0), InvalidArgument);
  CHECK_THROWS_AS(agresti_coull_ci(1, 4, 0.0), InvalidArgument);
}

TEST_CASE("agresti-coull matches the high-precision oracle") {
  gen::Engine e(2024);
  for (int i = 0; i < 2000; ++i) {
    const auto n = gen::uint_in(e, 1, 10'000'000);
    const auto x = gen::uint_in(e, 0, n);
    const double level = gen::real_in(e, 0.5, 0.9999);
    const auto got = agresti_coull_ci(x, n, level);
    const auto want = oracle::agresti_coull(x, n, level);
    INFO("x=" << x << " n=" << n << " level=" << level);
    REQUIRE(std::fabs(got.low - static_cast<double>(want.low)) <= 1e-9);
    REQUIRE(std::fabs(got.high - static_cast<double>(want.high)) <= 1e-9);
  }
}

TEST_CASE("parity verdicts") {
  CHECK(parity_test(Interval{0.495, 0.568}));
  CHECK_FALSE(parity_test(Interval{0.550, 0.576}));
  CHECK(parity_test(Interval{0.5, 0.5}));
  CHECK(parity_test(Interval{0.3, 0.4}, 0.4));
}

TEST_CASE("parity is invariant to swapping focal group with a reflected interval") {
  gen::Engine e(7);
  for (int i = 0; i < 5000; ++i) {
    const auto n = gen::uint_in(e, 1, 5000);
    const LabelCounts c{gen::uint_in(e, 0, n), 0, 0};
    LabelCounts d = c;
    d.female = n - c.male;
    const auto m = estimate_skew(d, GroupLabel::Male, Metric::Impressions, 0.99);
    const auto f = estimate_skew(d, GroupLabel::Female, Metric::Impressions, 0.99);
    REQUIRE(m.ci_low == doctest::Approx(1.0 - f.ci_high).epsilon(1e-12));
    REQUIRE(m.ci_high == doctest::Approx(1.0 - f.ci_low).epsilon(1e-12));
    const double target = gen::real_in(e, 0.3, 0.7);
    REQUIRE(parity_test(Interval{1.0 - m.ci_high, 1.0 - m.ci_low}, 1.0 - target) == parity_test(m, target));
    REQUIRE(parity_test(m) == parity_test(f));
  }
}

TEST_CASE("skew complement sums to one") {
  gen::Engine e(3);
  for (int i = 0; i < 10000; ++i) {
    LabelCounts c{gen::uint_in(e, 0, 1'000'000), gen::uint_in(e, 0, 1'000'000), gen::uint_in(e, 0, 1000)};
    if (c.known() == 0) continue;
    REQUIRE(skew(c, GroupLabel::Male) + skew(c, GroupLabel::Female) == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("interval width shrinks with trials") {
  for (double level : {0.9, 0.95, 0.99}) {
    for (double frac : {0.1, 0.5, 0.73}) {
      double prev = 2.0;
      for (std::uint64_t n = 10; n <= 10'000'000; n *= 10) {
        const auto x = static_cast<std::uint64_t>(std::llround(frac * static_cast<double>(n)));
        const auto ci = agresti_coull_ci(x, n, level);
        CHECK(ci.high - ci.low <= prev);
        prev = ci.high - ci.low;
      }
    }
  }
  const auto small = agresti_coull_ci(500, 1000, 0.99);
  const auto big = agresti_coull_ci(50'000, 100'000, 0.99);
  const double ratio = (small.high - small.low) / (big.high - big.low);
  CHECK(std::fabs(ratio / 10.0 - 1.0) < 0.10);
}

TEST_CASE("interval coverage at the nominal level") {
  Rng r(derive_stream(77, 1));
  int covered = 0;
  const int trials = 10'000;
  for (int i = 0; i < trials; ++i)
    covered += parity_test(agresti_coull_ci(r.binomial(1000, 0.5), 1000, 0.99)) ? 1 : 0;
  const double coverage = static_cast<double>(covered) / trials;
  CHECK(coverage >= 0.985);
  CHECK(coverage <= 0.999);
}

TEST_CASE("rates") {
  const Date d{0};
  std::vector<EngagementRecord> a{row(d, GroupLabel::Male, 1000, Cents{500})};
  CHECK(rates(a).cpm == doctest::Approx(5.0));
  std::vector<EngagementRecord> b{row(d, GroupLabel::Male, 400, Cents{100}, 20)};
  CHECK(rates(b).ctr == doctest::Approx(0.05));
  std::vector<EngagementRecord> c{row(d, GroupLabel::Male, 100)};
  CHECK(rates(c).cvr == 0.0);
  std::vector<EngagementRecord> z{row(d, GroupLabel::Male, 0)};
  CHECK_THROWS_AS(rates(z), UndefinedRate);

  std::vector<EngagementRecord> mixed{row(d, GroupLabel::Male, 100, Cents{300}, 10, 2),
                                      row(d + 1, GroupLabel::Male, 100, Cents{100}, 0, 0),
                                      row(d, GroupLabel::Female, 50, Cents{100}, 5, 5)};
  auto by = rates_by_label(mixed);
  REQUIRE(by.size() == 2);
  CHECK(by[GroupLabel::Male].ctr == doctest::Approx(0.05));
  CHECK(by[GroupLabel::Male].cvr == doctest::Approx(0.01));
  CHECK(by[GroupLabel::Male].cpm == doctest::Approx(20.0));
  CHECK(by[GroupLabel::Female].cpm == doctest::Approx(20.0));
  mixed.push_back(row(d, GroupLabel::Unknown, 0));
  CHECK_THROWS_AS(rates_by_label(mixed), UndefinedRate);
}

TEST_CASE("skew series examples") {
  const Date d0 = *Date::parse("2024-01-01");
  std::vector<EngagementRecord> daily;
  for (int i = 0; i < 14; ++i) {
    daily.push_back(row(d0 + i, GroupLabel::Male, 60));
    daily.push_back(row(d0 + i, GroupLabel::Female, 40));
  }
  auto weekly = skew_series(daily, WindowKind::Weekly, Metric::Impressions, GroupLabel::Male, 0.99);
  REQUIRE(weekly.size() == 2);
  CHECK(weekly[0].start == d0);
  CHECK(weekly[0].end == d0 + 6);
  CHECK(weekly[1].start == d0 + 7);
  CHECK_FALSE(weekly[1].partial);
  CHECK(weekly[1].estimate->point == doctest::Approx(0.6));
  CHECK(skew_series(daily, WindowKind::Daily, Metric::Impressions, GroupLabel::Male, 0.99).size() == 14);

  std::vector<EngagementRecord> whole{row(d0, GroupLabel::Male, 563), row(d0 + 3, GroupLabel::Female, 437)};
  auto w = skew_series(whole, WindowKind::Whole, Metric::Impressions, GroupLabel::Male, 0.99);
  REQUIRE(w.size() == 1);
  CHECK(w[0].estimate->point == doctest::Approx(0.563));

  std::vector<EngagementRecord> gap{row(d0, GroupLabel::Male, 10), row(d0, GroupLabel::Female, 10),
                                    row(d0 + 7, GroupLabel::Unknown, 10), row(d0 + 14, GroupLabel::Male, 10),
                                    row(d0 + 15, GroupLabel::Female, 10)};
  auto g = skew_series(gap, WindowKind::Weekly, Metric::Impressions, GroupLabel::Male, 0.99);
  REQUIRE(g.size() == 3);
  CHECK(g[0].estimate);
  CHECK_FALSE(g[1].estimate);
  CHECK(g[1].counts.unknown == 10);
  CHECK(g[2].estimate);
  CHECK(g[2].partial);
  CHECK(g[2].end == d0 + 15);

  CHECK_THROWS_AS(skew_series({}, WindowKind::Weekly, Metric::Impressions, GroupLabel::Male, 0.99),
                  InvalidArgument);
}

TEST_CASE("spend series counts cents") {
  const Date d0{100};
  std::vector<EngagementRecord> rs{row(d0, GroupLabel::Male, 5, Cents{300}, 1),
                                   row(d0, GroupLabel::Female, 5, Cents{100}, 1)};
  auto s = skew_series(rs, WindowKind::Whole, Metric::Spend, GroupLabel::Male, 0.99);
  CHECK(s[0].estimate->point == doctest::Approx(0.75));
  CHECK(s[0].estimate->n_total == 400);
}

TEST_CASE("whole window equals skew of summed counts, in any order") {
  gen::Engine e(11);
  for (int i = 0; i < 500; ++i) {
    std::vector<EngagementRecord> rs;
    const auto n = gen::uint_in(e, 1, 40);
    for (std::uint64_t k = 0; k < n; ++k) rs.push_back(gen::record(e));
    for (auto metric : {Metric::Impressions, Metric::Spend, Metric::Clicks}) {
      const auto sums = sum_by_label(rs, metric);
      auto w = skew_series(rs, WindowKind::Whole, metric, GroupLabel::Male, 0.99);
      REQUIRE(w.size() == 1);
      REQUIRE(w[0].counts == sums);
      if (sums.known() == 0) {
        REQUIRE_FALSE(w[0].estimate);
        continue;
      }
      REQUIRE(w[0].estimate->point == skew(sums, GroupLabel::Male));

      auto shuffled = rs;
      std::shuffle(shuffled.begin(), shuffled.end(), e);
      auto weekly_a = skew_series(rs, WindowKind::Weekly, metric, GroupLabel::Male, 0.99);
      auto weekly_b = skew_series(shuffled, WindowKind::Weekly, metric, GroupLabel::Male, 0.99);
      REQUIRE(weekly_a.size() == weekly_b.size());
      LabelCounts total;
      for (std::size_t k = 0; k < weekly_a.size(); ++k) {
        REQUIRE(weekly_a[k].counts == weekly_b[k].counts);
        for (auto l : kAllLabels) total[l] += weekly_a[k].counts[l];
      }
      REQUIRE(total == sums);
    }
  }
}

TEST_CASE("scaled reach delta") {
  CHECK(scaled_reach_delta(0.55, 0.52, 100000) == 3000);
  CHECK(scaled_reach_delta(0.5, 0.5, 10000) == 0);
  CHECK(scaled_reach_delta(0.48, 0.50, 10000) == -200);
  CHECK_THROWS_AS(scaled_reach_delta(0.5, 0.5, 0), InvalidArgument);
  CHECK_THROWS_AS(scaled_reach_delta(1.5, 0.5, 10), InvalidArgument);
}

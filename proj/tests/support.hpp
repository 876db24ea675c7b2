#pragma once

// Independent reference computations and random generators for tests.
// Nothing here calls into the library's numerics.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skewkit/core.hpp"
#include "skewkit/deliverysim.hpp"

namespace oracle {

// Upper-tail normal quantile by bisection on erfc, in long double.
inline long double upper_z(long double tail) {
  long double lo = 0.0L, hi = 40.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = (lo + hi) / 2;
    const long double q = 0.5L * std::erfc(mid / std::sqrt(2.0L));
    if (q > tail) lo = mid;
    else hi = mid;
  }
  return (lo + hi) / 2;
}

inline long double quantile(long double p) {
  return p < 0.5L ? -upper_z(p) : upper_z(1.0L - p);
}

inline long double two_sided_z(long double level) { return upper_z((1.0L - level) / 2); }

struct Interval {
  long double low, high;
};

inline Interval agresti_coull(std::uint64_t x, std::uint64_t n, long double level) {
  const long double z = two_sided_z(level);
  const long double z2 = z * z;
  const long double nt = static_cast<long double>(n) + z2;
  const long double pt = (static_cast<long double>(x) + z2 / 2) / nt;
  const long double hw = z * std::sqrt(pt * (1 - pt) / nt);
  return {std::max(0.0L, pt - hw), std::min(1.0L, pt + hw)};
}

inline long double binomial_pmf(std::uint64_t n, long double p, std::uint64_t k) {
  const long double lc = std::lgamma(static_cast<long double>(n) + 1) -
                         std::lgamma(static_cast<long double>(k) + 1) -
                         std::lgamma(static_cast<long double>(n - k) + 1);
  return std::exp(lc + k * std::log(p) + (n - k) * std::log1p(-p));
}

}  // namespace oracle

namespace gen {

using Engine = std::mt19937_64;

inline std::uint64_t uint_in(Engine& e, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(e);
}

inline double real_in(Engine& e, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(e);
}

template <typename T, std::size_t N>
T pick(Engine& e, const std::array<T, N>& xs) {
  return xs[uint_in(e, 0, N - 1)];
}

// A record consistent with the ledger invariants.
inline skewkit::EngagementRecord record(Engine& e, skewkit::Date first = skewkit::Date{19'700},
                                        int span_days = 60) {
  using namespace skewkit;
  EngagementRecord r;
  r.campaign_id = "c" + std::to_string(uint_in(e, 0, 4));
  r.date = first + static_cast<std::int32_t>(uint_in(e, 0, static_cast<std::uint64_t>(span_days - 1)));
  r.targeting = pick(e, kAllTargetings);
  const auto labels = labels_of(r.targeting);
  r.label = labels[uint_in(e, 0, labels.size() - 1)];
  r.impressions = uint_in(e, 0, 5000);
  r.clicks = uint_in(e, 0, r.impressions);
  r.conversions = uint_in(e, 0, r.clicks);
  r.spend = r.clicks == 0 ? Cents{0} : Cents{static_cast<std::int64_t>(uint_in(e, 0, r.clicks * 300))};
  return r;
}

inline skewkit::MarketModel market(Engine& e) {
  using namespace skewkit;
  MarketModel m;
  m.daily_opportunities = uint_in(e, 0, 400);
  const double a = real_in(e, 0, 1), b = real_in(e, 0, 1 - a);
  m.latent_mix = {a, b, 1.0 - a - b};
  m.inference = {real_in(e, 0, 0.5), real_in(e, 0, 0.5), real_in(e, 0.5, 1)};
  m.cpc_base = Cents{static_cast<std::int64_t>(uint_in(e, 1, 300))};
  m.cpc_premium = {real_in(e, 0.5, 2), real_in(e, 0.5, 2), real_in(e, 0.5, 2)};
  m.premium_scope = uint_in(e, 0, 1) ? PremiumScope::AllCampaigns : PremiumScope::LabelTargeted;
  m.cpc_dispersion = uint_in(e, 0, 2) == 0 ? 0.0 : real_in(e, 0, 1);
  m.ctr = {real_in(e, 0, 0.3), real_in(e, 0, 0.3), real_in(e, 0, 0.3)};
  m.cvr_given_click = {real_in(e, 0, 1), real_in(e, 0, 1), real_in(e, 0, 1)};
  return m;
}

inline skewkit::CampaignConfig campaign(Engine& e, const std::string& id) {
  using namespace skewkit;
  CampaignConfig c;
  c.campaign_id = id;
  c.targeting = pick(e, kAllTargetings);
  c.daily_budget = Cents{static_cast<std::int64_t>(uint_in(e, 0, 20'000))};
  if (uint_in(e, 0, 1)) {
    c.bidding_strategy = BiddingStrategy::MaxConversions;
    c.target_cpa = Cents{static_cast<std::int64_t>(uint_in(e, 1, 2000))};
  }
  return c;
}

}  // namespace gen

namespace testutil {

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("skewkit_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p, std::ios::binary);
  out << body;
}

}  // namespace testutil

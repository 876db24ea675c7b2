#include "skewkit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "skewkit/numerics.hpp"

namespace skewkit {

std::uint64_t& LabelCounts::operator[](GroupLabel l) {
  switch (l) {
    case GroupLabel::Male: return male;
    case GroupLabel::Female: return female;
    case GroupLabel::Unknown: break;
  }
  return unknown;
}

std::uint64_t LabelCounts::operator[](GroupLabel l) const {
  return const_cast<LabelCounts&>(*this)[l];
}

double skew(const LabelCounts& counts, GroupLabel focal) {
  if (focal == GroupLabel::Unknown) throw InvalidArgument("skew focal group must be male or female");
  const std::uint64_t denom = counts.known();
  if (denom == 0) throw UndefinedSkew("skew undefined: no male or female units");
  return static_cast<double>(counts[focal]) / static_cast<double>(denom);
}

Interval agresti_coull_ci(std::uint64_t successes, std::uint64_t trials, double level) {
  if (trials == 0) throw InvalidArgument("agresti_coull_ci: trials must be >= 1");
  if (successes > trials) throw InvalidArgument("agresti_coull_ci: successes exceed trials");
  const double z = two_sided_z(level);
  const double z2 = z * z;
  const double n_tilde = static_cast<double>(trials) + z2;
  const double p_tilde = (static_cast<double>(successes) + z2 / 2.0) / n_tilde;
  const double half = z * std::sqrt(p_tilde * (1.0 - p_tilde) / n_tilde);
  return {std::clamp(p_tilde - half, 0.0, 1.0), std::clamp(p_tilde + half, 0.0, 1.0)};
}

bool parity_test(const Interval& ci, double target) { return ci.low <= target && target <= ci.high; }

bool parity_test(const SkewEstimate& e, double target) {
  return parity_test(Interval{e.ci_low, e.ci_high}, target);
}

SkewEstimate estimate_skew(const LabelCounts& counts, GroupLabel focal, Metric metric, double level) {
  SkewEstimate e;
  e.point = skew(counts, focal);
  e.n_focal = counts[focal];
  e.n_total = counts.known();
  const auto ci = agresti_coull_ci(e.n_focal, e.n_total, level);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.level = level;
  e.metric = metric;
  e.focal = focal;
  return e;
}

LabelCounts sum_by_label(std::span<const EngagementRecord> records, Metric metric) {
  LabelCounts c;
  for (const auto& r : records) c[r.label] += metric_units(r, metric);
  return c;
}

FunnelTotals totals(std::span<const EngagementRecord> records) {
  FunnelTotals t;
  for (const auto& r : records) {
    t.impressions += r.impressions;
    t.clicks += r.clicks;
    t.conversions += r.conversions;
    t.spend += r.spend;
  }
  return t;
}

RateMetrics rates(const FunnelTotals& t) {
  if (t.impressions == 0) throw UndefinedRate("rates undefined: zero impressions");
  const double impr = static_cast<double>(t.impressions);
  return {static_cast<double>(t.clicks) / impr, static_cast<double>(t.conversions) / impr,
          1000.0 * t.spend.dollars() / impr};
}

RateMetrics rates(std::span<const EngagementRecord> records) { return rates(totals(records)); }

std::map<GroupLabel, RateMetrics> rates_by_label(std::span<const EngagementRecord> records) {
  std::map<GroupLabel, FunnelTotals> by;
  for (const auto& r : records) {
    auto& t = by[r.label];
    t.impressions += r.impressions;
    t.clicks += r.clicks;
    t.conversions += r.conversions;
    t.spend += r.spend;
  }
  std::map<GroupLabel, RateMetrics> out;
  for (const auto& [label, t] : by) {
    if (t.impressions == 0)
      throw UndefinedRate("rates undefined: zero impressions for label " + std::string(to_string(label)));
    out.emplace(label, rates(t));
  }
  return out;
}

std::string_view to_string(WindowKind w) {
  switch (w) {
    case WindowKind::Daily: return "daily";
    case WindowKind::Weekly: return "weekly";
    case WindowKind::Whole: return "whole";
  }
  return "?";
}

std::optional<WindowKind> parse_window(std::string_view text) {
  for (auto w : {WindowKind::Daily, WindowKind::Weekly, WindowKind::Whole})
    if (to_string(w) == text) return w;
  return std::nullopt;
}

std::vector<WindowEstimate> skew_series(std::span<const EngagementRecord> records,
                                        WindowKind window, Metric metric, GroupLabel focal,
                                        double level) {
  if (records.empty()) throw InvalidArgument("skew_series: no records");
  if (focal == GroupLabel::Unknown) throw InvalidArgument("skew focal group must be male or female");

  auto [lo_it, hi_it] = std::minmax_element(
      records.begin(), records.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  const Date first = lo_it->date;
  const Date last = hi_it->date;
  const std::int32_t span_days = (last - first) + 1;
  const std::int32_t width = window == WindowKind::Daily    ? 1
                             : window == WindowKind::Weekly ? 7
                                                            : span_days;
  const std::int32_t n_windows = (span_days + width - 1) / width;

  std::vector<WindowEstimate> out(static_cast<std::size_t>(n_windows));
  for (std::int32_t w = 0; w < n_windows; ++w) {
    auto& we = out[static_cast<std::size_t>(w)];
    we.start = first + w * width;
    const Date nominal_end = we.start + (width - 1);
    we.end = std::min(nominal_end, last);
    we.partial = nominal_end > last;
  }
  for (const auto& r : records) {
    const auto w = static_cast<std::size_t>((r.date - first) / width);
    out[w].counts[r.label] += metric_units(r, metric);
  }
  for (auto& we : out)
    if (we.counts.known() > 0) we.estimate = estimate_skew(we.counts, focal, metric, level);
  return out;
}

std::int64_t scaled_reach_delta(double skew_before, double skew_after, std::uint64_t n_mf) {
  if (n_mf == 0) throw InvalidArgument("scaled_reach_delta: n_mf must be positive");
  if (skew_before < 0.0 || skew_before > 1.0 || skew_after < 0.0 || skew_after > 1.0)
    throw InvalidArgument("scaled_reach_delta: skews must lie in [0, 1]");
  return std::llround((skew_before - skew_after) * static_cast<double>(n_mf));
}

}  // namespace skewkit

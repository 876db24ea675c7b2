#pragma once

// Audit statistics: skew ratios, Agresti-Coull intervals, parity verdicts,
// funnel rates and windowed skew series.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "skewkit/core.hpp"

namespace skewkit {

struct LabelCounts {
  std::uint64_t male = 0;
  std::uint64_t female = 0;
  std::uint64_t unknown = 0;

  std::uint64_t& operator[](GroupLabel l);
  std::uint64_t operator[](GroupLabel l) const;
  std::uint64_t known() const { return male + female; }

  friend bool operator==(const LabelCounts&, const LabelCounts&) = default;
};

/// Focal share among Male+Female units. Unknown never enters the ratio.
/// Throws InvalidArgument if focal is Unknown, UndefinedSkew if M+F == 0.
double skew(const LabelCounts& counts, GroupLabel focal);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Agresti-Coull interval, clamped to [0, 1]:
///   n~ = n + z^2,  p~ = (x + z^2/2) / n~,  p~ +/- z sqrt(p~(1-p~)/n~)
Interval agresti_coull_ci(std::uint64_t successes, std::uint64_t trials, double level);

/// True iff target lies inside the closed interval.
bool parity_test(const Interval& ci, double target = 0.5);
bool parity_test(const SkewEstimate& estimate, double target = 0.5);

/// Point estimate + interval for one metric. Spend uses cents as trials,
/// which makes the spend interval a heuristic.
SkewEstimate estimate_skew(const LabelCounts& counts, GroupLabel focal, Metric metric, double level);

LabelCounts sum_by_label(std::span<const EngagementRecord> records, Metric metric);

struct FunnelTotals {
  std::uint64_t impressions = 0;
  std::uint64_t clicks = 0;
  std::uint64_t conversions = 0;
  Cents spend;
};

FunnelTotals totals(std::span<const EngagementRecord> records);

/// Throws UndefinedRate when impressions are zero.
RateMetrics rates(const FunnelTotals& t);
RateMetrics rates(std::span<const EngagementRecord> records);
/// One entry per label present in the records. Throws UndefinedRate if a
/// present label has zero impressions.
std::map<GroupLabel, RateMetrics> rates_by_label(std::span<const EngagementRecord> records);

enum class WindowKind : std::uint8_t { Daily, Weekly, Whole };
std::string_view to_string(WindowKind w);
std::optional<WindowKind> parse_window(std::string_view text);

struct WindowEstimate {
  Date start;
  Date end;  // inclusive
  /// Trailing weekly window cut short by the end of the data.
  bool partial = false;
  LabelCounts counts;
  /// nullopt marks an undefined window (no Male or Female units).
  std::optional<SkewEstimate> estimate;
};

/// Windows are anchored at the earliest record date and cover every day
/// through the latest one, so empty windows appear as undefined entries.
std::vector<WindowEstimate> skew_series(std::span<const EngagementRecord> records,
                                        WindowKind window, Metric metric, GroupLabel focal,
                                        double level);

/// round((before - after) * n_mf). Positive means the complement group
/// gained that many units.
std::int64_t scaled_reach_delta(double skew_before, double skew_after, std::uint64_t n_mf);

}  // namespace skewkit

#pragma once

// Budget-split campaign plans and the CPM-driven budget controller.

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skewkit/core.hpp"
#include "skewkit/schedule.hpp"

namespace skewkit {

/// Requested share of male-labelled delivery; female gets the rest.
struct DesiredRatio {
  double male_share = 0.5;

  double share(Side s) const { return s == Side::Male ? male_share : 1.0 - male_share; }
};

enum class SplitVariant : std::uint8_t { AllUsers, DirectSplit, UnknownAwareSplit };
std::string_view to_string(SplitVariant v);
std::optional<SplitVariant> parse_variant(std::string_view text);

/// Raised when a platform cannot express the targeting a plan needs.
struct UnsupportedTargeting : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

struct SideBudgets {
  Cents male;
  Cents female;

  Cents operator[](Side s) const { return s == Side::Male ? male : female; }
};

/// Observed cost per 1,000 impressions for each side, in dollars.
struct SideCpm {
  double male = 0.0;
  double female = 0.0;

  double operator[](Side s) const { return s == Side::Male ? male : female; }
};

/// Without CPMs: budget_side = total * share_side.
/// With CPMs: budget_side ∝ share_side * cpm_side, so purchased impressions
/// follow the desired ratio. Female is floored to the cent and the male side
/// takes the remainder, so the two always sum to total.
SideBudgets allocate_budgets(Cents total, DesiredRatio ratio, std::optional<SideCpm> cpm = {});

struct SplitOptions {
  /// Whether the platform can exclude one binary label to reach unknowns.
  bool supports_exclude_targeting = true;
  std::uint32_t period_slots = 1;
  std::uint32_t horizon_slots = 42;
  std::uint32_t slots_per_day = 1;
  Phase phase = Phase::AFirst;
  /// Cost priors for the initial allocation.
  std::optional<SideCpm> cpm;
};

struct SplitPlan {
  SplitVariant variant = SplitVariant::AllUsers;
  std::vector<CampaignConfig> campaigns;
  std::map<std::string, Cents> budgets;
  std::optional<CycleSchedule> schedule;

  Cents total() const;
  Cents side_total(Side s) const;
};

/// AllUsers: the original campaign unchanged.
/// DirectSplit: {Male}, {Female}, both always on.
/// UnknownAwareSplit: cycle A runs {Female} and {Male, Unknown}; cycle B runs
/// {Male} and {Female, Unknown}. Each side's budget is halved between its
/// two campaigns, which are active on alternate slots.
SplitPlan build_split(const CampaignConfig& original, SplitVariant variant, DesiredRatio ratio,
                      const SplitOptions& options = {});

/// Per-side CPM from the plan's own rows of a ledger. Unknown-labelled
/// engagement counts toward the side of the campaign that bought it.
/// Throws InsufficientData if a side has no impressions or no spend.
SideCpm observed_side_cpm(const SplitPlan& plan, std::span<const EngagementRecord> ledger);

/// Reallocates the plan's total budget using observed side CPMs.
SplitPlan rebalance(const SplitPlan& plan, std::span<const EngagementRecord> ledger,
                    DesiredRatio ratio);

}  // namespace skewkit

#include "skewkit/intervention.hpp"

#include <algorithm>
#include <cmath>

#include "skewkit/metrics.hpp"

namespace skewkit {

std::string_view to_string(SplitVariant v) {
  switch (v) {
    case SplitVariant::AllUsers: return "all_users";
    case SplitVariant::DirectSplit: return "direct_split";
    case SplitVariant::UnknownAwareSplit: return "unknown_aware_split";
  }
  return "?";
}

std::optional<SplitVariant> parse_variant(std::string_view text) {
  for (auto v : {SplitVariant::AllUsers, SplitVariant::DirectSplit, SplitVariant::UnknownAwareSplit})
    if (to_string(v) == text) return v;
  return std::nullopt;
}

SideBudgets allocate_budgets(Cents total, DesiredRatio ratio, std::optional<SideCpm> cpm) {
  if (total < Cents::zero()) throw InvalidArgument("allocate_budgets: total must be >= 0");
  if (!(ratio.male_share >= 0.0 && ratio.male_share <= 1.0))
    throw InvalidArgument("allocate_budgets: male share must lie in [0, 1]");

  double female_weight = ratio.share(Side::Female);
  if (cpm) {
    for (double c : {cpm->male, cpm->female})
      if (!(c > 0.0) || !std::isfinite(c)) throw InvalidArgument("allocate_budgets: CPM must be positive");
    const double m = ratio.share(Side::Male) * cpm->male;
    const double f = ratio.share(Side::Female) * cpm->female;
    female_weight = f / (m + f);
  }
  // The epsilon (a millionth of a cent) absorbs representation error such as
  // 6500 * 0.6 = 3899.9999999999995.
  const double raw = static_cast<double>(total.value()) * female_weight;
  auto female = static_cast<std::int64_t>(std::floor(raw + 1e-6));
  female = std::clamp<std::int64_t>(female, 0, total.value());
  return {Cents{total.value() - female}, Cents{female}};
}

Cents SplitPlan::total() const {
  Cents sum;
  for (const auto& [id, b] : budgets) sum += b;
  return sum;
}

Cents SplitPlan::side_total(Side s) const {
  Cents sum;
  for (const auto& c : campaigns)
    if (side_of(c.targeting) == s) sum += budgets.at(c.campaign_id);
  return sum;
}

namespace {

CampaignConfig child(const CampaignConfig& original, Targeting t, std::optional<Cycle> cycle) {
  CampaignConfig c = original;
  c.campaign_id = original.campaign_id + "-" + std::string(to_string(t));
  c.targeting = t;
  c.cycle = cycle;
  c.label = original.label.empty() ? std::string(to_string(t))
                                   : original.label + " / " + std::string(to_string(t));
  return c;
}

// Writes side budgets into the plan's campaigns. Under the unknown-aware
// split each side has two campaigns; the Single Gender + Unknown one gets
// the floor of half and the Single Gender one the rest.
void assign_budgets(SplitPlan& plan, const SideBudgets& sides) {
  plan.budgets.clear();
  for (auto& c : plan.campaigns) {
    const Side side = *side_of(c.targeting);
    const Cents side_budget = sides[side];
    Cents b = side_budget;
    if (plan.variant == SplitVariant::UnknownAwareSplit) {
      const Cents half{side_budget.value() / 2};
      b = granularity_of(c.targeting) == Granularity::SingleGenderUnknown ? half : side_budget - half;
    }
    c.daily_budget = b;
    plan.budgets[c.campaign_id] = b;
  }
}

}  // namespace

SplitPlan build_split(const CampaignConfig& original, SplitVariant variant, DesiredRatio ratio,
                      const SplitOptions& options) {
  if (original.targeting != Targeting::All)
    throw InvalidArgument("build_split: the original campaign must target all users");
  if (auto issues = validate_campaign(original); !issues.empty())
    throw InvalidArgument("build_split: invalid original campaign: " + issues.front());

  SplitPlan plan;
  plan.variant = variant;
  switch (variant) {
    case SplitVariant::AllUsers:
      plan.campaigns.push_back(original);
      plan.budgets[original.campaign_id] = original.daily_budget;
      return plan;
    case SplitVariant::DirectSplit:
      plan.campaigns.push_back(child(original, Targeting::Male, std::nullopt));
      plan.campaigns.push_back(child(original, Targeting::Female, std::nullopt));
      break;
    case SplitVariant::UnknownAwareSplit:
      if (!options.supports_exclude_targeting)
        throw UnsupportedTargeting(
            "unknown-aware split needs exclusion targeting, which this platform lacks");
      plan.campaigns.push_back(child(original, Targeting::Female, Cycle::A));
      plan.campaigns.push_back(child(original, Targeting::MaleUnknown, Cycle::A));
      plan.campaigns.push_back(child(original, Targeting::Male, Cycle::B));
      plan.campaigns.push_back(child(original, Targeting::FemaleUnknown, Cycle::B));
      plan.schedule = make_schedule(options.period_slots, options.horizon_slots, options.phase,
                                    options.slots_per_day);
      break;
  }
  assign_budgets(plan, allocate_budgets(original.daily_budget, ratio, options.cpm));
  return plan;
}

SideCpm observed_side_cpm(const SplitPlan& plan, std::span<const EngagementRecord> ledger) {
  std::map<std::string, Side> side_by_id;
  for (const auto& c : plan.campaigns)
    if (auto s = side_of(c.targeting)) side_by_id.emplace(c.campaign_id, *s);

  FunnelTotals male, female;
  for (const auto& r : ledger) {
    auto it = side_by_id.find(r.campaign_id);
    if (it == side_by_id.end()) continue;
    auto& t = it->second == Side::Male ? male : female;
    t.impressions += r.impressions;
    t.spend += r.spend;
  }
  auto cpm = [](const FunnelTotals& t, Side s) {
    if (t.impressions == 0 || t.spend <= Cents::zero())
      throw InsufficientData("no impressions or spend observed for " + std::string(to_string(s)));
    return 1000.0 * t.spend.dollars() / static_cast<double>(t.impressions);
  };
  return {cpm(male, Side::Male), cpm(female, Side::Female)};
}

SplitPlan rebalance(const SplitPlan& plan, std::span<const EngagementRecord> ledger,
                    DesiredRatio ratio) {
  if (plan.variant == SplitVariant::AllUsers)
    throw InvalidArgument("rebalance: an all-users plan has no sides to rebalance");
  const SideCpm cpm = observed_side_cpm(plan, ledger);
  SplitPlan next = plan;
  assign_budgets(next, allocate_budgets(plan.total(), ratio, cpm));
  return next;
}

}  // namespace skewkit

#pragma once

// Stylized paid-search delivery.
//
// Each slot the platform draws a stream of ad opportunities. Every
// opportunity has a latent gender, a platform label, a quoted click price
// and pre-sampled click/convert outcomes. An opportunity goes to the one
// active campaign whose targeting covers its label (lowest campaign_id on
// overlap). Each campaign ranks its pool by its bidding strategy and takes
// opportunities until the next quote no longer fits in the remaining
// budget. Spend accrues per click.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skewkit/core.hpp"
#include "skewkit/rng.hpp"
#include "skewkit/schedule.hpp"

namespace skewkit {

template <typename T>
struct PerLabel {
  T male{};
  T female{};
  T unknown{};

  T& operator[](GroupLabel l) { return l == GroupLabel::Male ? male : l == GroupLabel::Female ? female : unknown; }
  const T& operator[](GroupLabel l) const {
    return l == GroupLabel::Male ? male : l == GroupLabel::Female ? female : unknown;
  }
  friend bool operator==(const PerLabel&, const PerLabel&) = default;
};

enum class PremiumScope : std::uint8_t { AllCampaigns, LabelTargeted };
std::string_view to_string(PremiumScope s);
std::optional<PremiumScope> parse_premium_scope(std::string_view text);

struct InferenceModel {
  /// Chance a latent male / female user surfaces as Unknown. Latent Other
  /// always surfaces as Unknown.
  double p_unknown_male = 0.0;
  double p_unknown_female = 0.0;
  /// For users who get a binary label: chance it matches the latent gender.
  double p_correct_given_known = 1.0;

  friend bool operator==(const InferenceModel&, const InferenceModel&) = default;
};

struct MarketModel {
  std::uint64_t daily_opportunities = 0;
  /// Latent male, female, other shares.
  std::array<double, 3> latent_mix{1.0, 0.0, 0.0};
  InferenceModel inference;
  Cents cpc_base{100};
  /// Competition premium keyed by platform label.
  PerLabel<double> cpc_premium{1.0, 1.0, 1.0};
  /// Which campaigns pay the label premium. Under LabelTargeted an
  /// all-users campaign buys in the unsegmented auction at cpc_base.
  PremiumScope premium_scope = PremiumScope::AllCampaigns;
  /// Log-scale spread of per-opportunity competition around the label
  /// price; 0 makes every quote exactly cpc_base * premium.
  double cpc_dispersion = 0.0;
  PerLabel<double> ctr;
  PerLabel<double> cvr_given_click;

  /// Synthetic market used by the calibration scenario. Values are made up
  /// to exhibit the engagement-gap and competition-premium mechanisms.
  static MarketModel calibration();

  std::vector<std::string> validate() const;

  friend bool operator==(const MarketModel&, const MarketModel&) = default;
};

struct Opportunity {
  LatentGender latent = LatentGender::Male;
  GroupLabel label = GroupLabel::Male;
  /// cpc_base * premium[label] * competition noise.
  Cents cpc_quote;
  /// Same draw without the label premium.
  Cents open_quote;
  bool will_click = false;
  bool will_convert = false;
};

std::vector<Opportunity> generate_opportunities(const MarketModel& market, std::uint64_t count,
                                                Rng& rng);
inline std::vector<Opportunity> generate_day(const MarketModel& market, Rng& rng) {
  return generate_opportunities(market, market.daily_opportunities, rng);
}

/// Click price a campaign with this targeting pays for the opportunity.
Cents click_price(const MarketModel& market, Targeting targeting, const Opportunity& o);

/// Ranking score (lower is served first): click price divided by the
/// predicted per-impression probability of the strategy's outcome (click
/// for MaxClicks, conversion for MaxConversions). +inf when that
/// probability is zero.
double ranking_score(BiddingStrategy strategy, const MarketModel& market, GroupLabel label,
                     Cents price);

/// Expected cost per conversion in dollars, used by the MaxConversions CPA
/// filter.
double expected_cpa(const MarketModel& market, GroupLabel label, Cents price);

/// Budget a campaign may spend within one slot of day `day_index`. Zero
/// when the campaign is not active in that slot. Cycle-bound campaigns run
/// half the time, so an active slot carries twice the average daily rate.
Cents slot_budget(const CampaignConfig& campaign, const CycleSchedule* schedule,
                  std::uint32_t day_index, std::uint32_t slot_in_day);

/// Sum of slot budgets over one day.
Cents day_budget_cap(const CampaignConfig& campaign, const CycleSchedule* schedule,
                     std::uint32_t day_index);

/// One record per (active campaign, targeted label), in campaign order then
/// label order. Campaigns with no active slot that day emit nothing.
std::vector<EngagementRecord> run_day(std::span<const CampaignConfig> campaigns,
                                      const MarketModel& market, const CycleSchedule* schedule,
                                      std::uint32_t day_index, Date date, Rng& rng);

/// Day d draws from the stream derive_stream(seed, d).
std::vector<EngagementRecord> run_horizon(std::span<const CampaignConfig> campaigns,
                                          const MarketModel& market, std::uint32_t days,
                                          std::uint64_t seed, const CycleSchedule* schedule = nullptr,
                                          Date start = Date{0});

/// Independent horizons, one per seed, in seed order. Replications run in
/// parallel.
std::vector<std::vector<EngagementRecord>> run_replications(
    std::span<const CampaignConfig> campaigns, const MarketModel& market, std::uint32_t days,
    std::span<const std::uint64_t> seeds, const CycleSchedule* schedule = nullptr,
    Date start = Date{0});

namespace reference {
std::vector<std::vector<EngagementRecord>> run_replications(
    std::span<const CampaignConfig> campaigns, const MarketModel& market, std::uint32_t days,
    std::span<const std::uint64_t> seeds, const CycleSchedule* schedule = nullptr,
    Date start = Date{0});
}  // namespace reference

}  // namespace skewkit

#include "skewkit/deliverysim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "skewkit/metrics.hpp"
#include "skewkit/numerics.hpp"

namespace skewkit {

std::string_view to_string(PremiumScope s) {
  return s == PremiumScope::AllCampaigns ? "all_campaigns" : "label_targeted";
}

std::optional<PremiumScope> parse_premium_scope(std::string_view text) {
  if (text == "all_campaigns") return PremiumScope::AllCampaigns;
  if (text == "label_targeted") return PremiumScope::LabelTargeted;
  return std::nullopt;
}

MarketModel MarketModel::calibration() {
  MarketModel m;
  m.daily_opportunities = 4000;
  m.latent_mix = {0.5, 0.5, 0.0};
  m.inference = {0.15, 0.25, 0.95};
  m.cpc_base = Cents{50};
  m.cpc_premium = {1.1, 1.5, 1.0};
  m.premium_scope = PremiumScope::LabelTargeted;
  m.cpc_dispersion = 0.4;
  m.ctr = {0.06, 0.05, 0.05};
  m.cvr_given_click = {0.30, 0.40, 0.35};
  return m;
}

std::vector<std::string> MarketModel::validate() const {
  std::vector<std::string> issues;
  auto prob = [&](double p, const std::string& what) {
    if (!(p >= 0.0 && p <= 1.0)) issues.push_back(what + " must lie in [0, 1]");
  };
  double mix_sum = 0.0;
  for (std::size_t i = 0; i < latent_mix.size(); ++i) {
    prob(latent_mix[i], "latent_mix." + std::string(to_string(kAllLatent[i])));
    mix_sum += latent_mix[i];
  }
  if (!(std::fabs(mix_sum - 1.0) <= 1e-9)) issues.emplace_back("latent_mix must sum to 1");
  prob(inference.p_unknown_male, "inference.p_unknown.male");
  prob(inference.p_unknown_female, "inference.p_unknown.female");
  prob(inference.p_correct_given_known, "inference.p_correct_given_known");
  if (cpc_base < Cents::zero()) issues.emplace_back("cpc_base must be >= 0");
  for (auto l : kAllLabels) {
    const std::string name(to_string(l));
    if (!(cpc_premium[l] >= 0.0) || !std::isfinite(cpc_premium[l]))
      issues.push_back("cpc_premium." + name + " must be a finite number >= 0");
    prob(ctr[l], "ctr." + name);
    prob(cvr_given_click[l], "cvr_given_click." + name);
  }
  if (!(cpc_dispersion >= 0.0) || !std::isfinite(cpc_dispersion))
    issues.emplace_back("cpc_dispersion must be a finite number >= 0");
  return issues;
}

std::vector<Opportunity> generate_opportunities(const MarketModel& market, std::uint64_t count,
                                                Rng& rng) {
  std::vector<Opportunity> out;
  out.reserve(count);
  const double sigma = market.cpc_dispersion;
  for (std::uint64_t i = 0; i < count; ++i) {
    // Fixed number of variates per opportunity keeps streams aligned across
    // markets that differ only in rates.
    const double u_latent = rng.uniform();
    const double u_unknown = rng.uniform();
    const double u_correct = rng.uniform();
    const double u_price = rng.uniform_open();
    const double u_click = rng.uniform();
    const double u_convert = rng.uniform();

    Opportunity o;
    if (u_latent < market.latent_mix[0]) o.latent = LatentGender::Male;
    else if (u_latent < market.latent_mix[0] + market.latent_mix[1]) o.latent = LatentGender::Female;
    else o.latent = LatentGender::Other;

    if (o.latent == LatentGender::Other) {
      o.label = GroupLabel::Unknown;
    } else {
      const bool male = o.latent == LatentGender::Male;
      const double p_unknown =
          male ? market.inference.p_unknown_male : market.inference.p_unknown_female;
      if (u_unknown < p_unknown) o.label = GroupLabel::Unknown;
      else if (u_correct < market.inference.p_correct_given_known)
        o.label = male ? GroupLabel::Male : GroupLabel::Female;
      else o.label = male ? GroupLabel::Female : GroupLabel::Male;
    }

    double factor = 1.0;
    if (sigma > 0.0) factor = std::exp(sigma * normal_quantile(u_price) - 0.5 * sigma * sigma);
    const double open = static_cast<double>(market.cpc_base.value()) * factor;
    o.cpc_quote = Cents{std::llround(open * market.cpc_premium[o.label])};
    o.open_quote = Cents{std::llround(open)};
    o.will_click = u_click < market.ctr[o.label];
    o.will_convert = o.will_click && u_convert < market.cvr_given_click[o.label];
    out.push_back(o);
  }
  return out;
}

Cents click_price(const MarketModel& market, Targeting targeting, const Opportunity& o) {
  if (market.premium_scope == PremiumScope::LabelTargeted && targeting == Targeting::All)
    return o.open_quote;
  return o.cpc_quote;
}

double ranking_score(BiddingStrategy strategy, const MarketModel& market, GroupLabel label,
                     Cents price) {
  double p = market.ctr[label];
  if (strategy == BiddingStrategy::MaxConversions) p *= market.cvr_given_click[label];
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(price.value()) / p;
}

double expected_cpa(const MarketModel& market, GroupLabel label, Cents price) {
  const double cvr = market.cvr_given_click[label];
  if (cvr <= 0.0) return std::numeric_limits<double>::infinity();
  return price.dollars() / cvr;
}

namespace {

std::uint32_t slots_per_day(const CycleSchedule* schedule) {
  return schedule ? schedule->slots_per_day : 1;
}

bool active_in_slot(const CampaignConfig& c, const CycleSchedule* schedule, std::uint32_t day,
                    std::uint32_t slot) {
  if (!c.cycle) return true;
  if (!schedule)
    throw InvalidArgument("campaign " + c.campaign_id + " is cycle-bound but no schedule was given");
  const std::uint64_t global = static_cast<std::uint64_t>(day) * schedule->slots_per_day + slot;
  return schedule->cycle_at(global) == *c.cycle;
}

bool active_on_day(const CampaignConfig& c, const CycleSchedule* schedule, std::uint32_t day) {
  for (std::uint32_t s = 0; s < slots_per_day(schedule); ++s)
    if (active_in_slot(c, schedule, day, s)) return true;
  return false;
}

// Splits `amount` evenly over `parts`, remainder to the earliest parts.
std::int64_t share_of(std::int64_t amount, std::uint32_t parts, std::uint32_t index) {
  const std::int64_t base = amount / parts;
  return base + (static_cast<std::int64_t>(index) < amount % parts ? 1 : 0);
}

struct Accumulator {
  PerLabel<FunnelTotals> by_label;
};

void run_slot(std::span<const CampaignConfig> campaigns, const MarketModel& market,
              std::span<const Opportunity> opps, std::span<const Cents> budgets,
              std::vector<Accumulator>& acc) {
  // Owner per label: the lowest campaign_id among funded eligible campaigns.
  PerLabel<std::ptrdiff_t> owner{-1, -1, -1};
  for (auto label : kAllLabels) {
    for (std::size_t i = 0; i < campaigns.size(); ++i) {
      if (budgets[i] <= Cents::zero() || !targets(campaigns[i].targeting, label)) continue;
      auto& cur = owner[label];
      if (cur < 0 || campaigns[i].campaign_id < campaigns[static_cast<std::size_t>(cur)].campaign_id)
        cur = static_cast<std::ptrdiff_t>(i);
    }
  }

  std::vector<std::vector<std::size_t>> pools(campaigns.size());
  for (std::size_t k = 0; k < opps.size(); ++k)
    if (auto o = owner[opps[k].label]; o >= 0) pools[static_cast<std::size_t>(o)].push_back(k);

  std::vector<double> score(opps.size());
  std::vector<Cents> price(opps.size());
  for (std::size_t i = 0; i < campaigns.size(); ++i) {
    const auto& c = campaigns[i];
    auto& pool = pools[i];
    if (pool.empty()) continue;
    for (auto k : pool) price[k] = click_price(market, c.targeting, opps[k]);
    if (c.bidding_strategy == BiddingStrategy::MaxConversions && c.target_cpa) {
      const double cap = c.target_cpa->dollars();
      std::erase_if(pool, [&](std::size_t k) {
        return expected_cpa(market, opps[k].label, price[k]) > cap;
      });
    }
    for (auto k : pool) score[k] = ranking_score(c.bidding_strategy, market, opps[k].label, price[k]);
    std::stable_sort(pool.begin(), pool.end(),
                     [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

    Cents remaining = budgets[i];
    for (auto k : pool) {
      const auto& o = opps[k];
      if (remaining <= Cents::zero() || price[k] > remaining) break;
      auto& t = acc[i].by_label[o.label];
      t.impressions += 1;
      if (o.will_click) {
        t.clicks += 1;
        t.spend += price[k];
        remaining -= price[k];
        if (o.will_convert) t.conversions += 1;
      }
    }
  }
}

void check_inputs(std::span<const CampaignConfig> campaigns, const MarketModel& market,
                  const CycleSchedule* schedule) {
  if (auto issues = market.validate(); !issues.empty())
    throw InvalidArgument("invalid market: " + issues.front());
  for (const auto& c : campaigns) {
    if (auto issues = validate_campaign(c); !issues.empty())
      throw InvalidArgument("invalid campaign " + c.campaign_id + ": " + issues.front());
    if (c.cycle && !schedule)
      throw InvalidArgument("campaign " + c.campaign_id + " is cycle-bound but no schedule was given");
  }
  if (schedule && (schedule->slots_per_day < 1 || schedule->slots_per_day > 2 || schedule->period_slots < 1))
    throw InvalidArgument("invalid cycle schedule");
}

std::vector<EngagementRecord> run_day_unchecked(std::span<const CampaignConfig> campaigns,
                                                const MarketModel& market,
                                                const CycleSchedule* schedule,
                                                std::uint32_t day_index, Date date, Rng& rng) {
  const std::uint32_t spd = slots_per_day(schedule);
  std::vector<Accumulator> acc(campaigns.size());
  std::vector<Cents> budgets(campaigns.size());
  for (std::uint32_t s = 0; s < spd; ++s) {
    const auto n = static_cast<std::uint64_t>(
        share_of(static_cast<std::int64_t>(market.daily_opportunities), spd, s));
    const auto opps = generate_opportunities(market, n, rng);
    for (std::size_t i = 0; i < campaigns.size(); ++i)
      budgets[i] = slot_budget(campaigns[i], schedule, day_index, s);
    run_slot(campaigns, market, opps, budgets, acc);
  }

  std::vector<EngagementRecord> out;
  for (std::size_t i = 0; i < campaigns.size(); ++i) {
    const auto& c = campaigns[i];
    if (!active_on_day(c, schedule, day_index)) continue;
    for (auto label : labels_of(c.targeting)) {
      const auto& t = acc[i].by_label[label];
      out.push_back({c.campaign_id, date, c.targeting, label, t.impressions, t.clicks,
                     t.conversions, t.spend});
    }
  }
  return out;
}

std::vector<EngagementRecord> run_horizon_unchecked(std::span<const CampaignConfig> campaigns,
                                                    const MarketModel& market, std::uint32_t days,
                                                    std::uint64_t seed,
                                                    const CycleSchedule* schedule, Date start) {
  std::vector<EngagementRecord> ledger;
  for (std::uint32_t d = 0; d < days; ++d) {
    Rng rng(derive_stream(seed, d));
    auto day = run_day_unchecked(campaigns, market, schedule, d, start + static_cast<std::int32_t>(d), rng);
    ledger.insert(ledger.end(), std::make_move_iterator(day.begin()),
                  std::make_move_iterator(day.end()));
  }
  return ledger;
}

}  // namespace

Cents slot_budget(const CampaignConfig& campaign, const CycleSchedule* schedule,
                  std::uint32_t day_index, std::uint32_t slot_in_day) {
  if (!active_in_slot(campaign, schedule, day_index, slot_in_day)) return Cents::zero();
  const std::int64_t rate = campaign.cycle ? 2 * campaign.daily_budget.value()
                                           : campaign.daily_budget.value();
  return Cents{share_of(rate, slots_per_day(schedule), slot_in_day)};
}

Cents day_budget_cap(const CampaignConfig& campaign, const CycleSchedule* schedule,
                     std::uint32_t day_index) {
  Cents cap;
  for (std::uint32_t s = 0; s < slots_per_day(schedule); ++s)
    cap += slot_budget(campaign, schedule, day_index, s);
  return cap;
}

std::vector<EngagementRecord> run_day(std::span<const CampaignConfig> campaigns,
                                      const MarketModel& market, const CycleSchedule* schedule,
                                      std::uint32_t day_index, Date date, Rng& rng) {
  check_inputs(campaigns, market, schedule);
  return run_day_unchecked(campaigns, market, schedule, day_index, date, rng);
}

std::vector<EngagementRecord> run_horizon(std::span<const CampaignConfig> campaigns,
                                          const MarketModel& market, std::uint32_t days,
                                          std::uint64_t seed, const CycleSchedule* schedule,
                                          Date start) {
  if (days < 1) throw InvalidArgument("run_horizon: days must be >= 1");
  check_inputs(campaigns, market, schedule);
  return run_horizon_unchecked(campaigns, market, days, seed, schedule, start);
}

std::vector<std::vector<EngagementRecord>> run_replications(
    std::span<const CampaignConfig> campaigns, const MarketModel& market, std::uint32_t days,
    std::span<const std::uint64_t> seeds, const CycleSchedule* schedule, Date start) {
  if (days < 1) throw InvalidArgument("run_replications: days must be >= 1");
  check_inputs(campaigns, market, schedule);
  std::vector<std::vector<EngagementRecord>> out(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = run_horizon_unchecked(campaigns, market, days, seeds[k], schedule, start);
  }
  return out;
}

namespace reference {

std::vector<std::vector<EngagementRecord>> run_replications(
    std::span<const CampaignConfig> campaigns, const MarketModel& market, std::uint32_t days,
    std::span<const std::uint64_t> seeds, const CycleSchedule* schedule, Date start) {
  if (days < 1) throw InvalidArgument("run_replications: days must be >= 1");
  check_inputs(campaigns, market, schedule);
  std::vector<std::vector<EngagementRecord>> out;
  out.reserve(seeds.size());
  for (auto seed : seeds)
    out.push_back(run_horizon_unchecked(campaigns, market, days, seed, schedule, start));
  return out;
}

}  // namespace reference

}  // namespace skewkit

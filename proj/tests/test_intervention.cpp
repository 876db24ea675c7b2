#include <doctest.h>

#include "skewkit/intervention.hpp"
#include "support.hpp"

using namespace skewkit;

namespace {

CampaignConfig original(Cents budget = Cents{6500}) {
  CampaignConfig c;
  c.campaign_id = "camp";
  c.daily_budget = budget;
  return c;
}

EngagementRecord row(const std::string& id, Targeting t, GroupLabel l, std::uint64_t impressions,
                     Cents spend) {
  return {id, Date{0}, t, l, impressions, impressions, 0, spend};
}

}  // namespace

TEST_CASE("schedules") {
  auto s = make_schedule(1, 14, Phase::AFirst);
  CHECK(s.cycle_at(0) == Cycle::A);
  CHECK(s.cycle_at(1) == Cycle::B);
  CHECK(s.cycle_at(2) == Cycle::A);
  CHECK(s.count(Cycle::A) == 7);
  CHECK(s.count(Cycle::B) == 7);
  CHECK(s.balanced());

  auto w = make_schedule(7, 42, Phase::AFirst);
  for (std::uint64_t d = 0; d < 42; ++d) CHECK(w.cycle_at(d) == ((d / 7) % 2 == 0 ? Cycle::A : Cycle::B));
  CHECK(w.count(Cycle::A) == 21);
  CHECK(w.count(Cycle::B) == 21);

  auto odd = make_schedule(1, 13, Phase::AFirst);
  CHECK(odd.count(Cycle::A) == 7);
  CHECK(odd.count(Cycle::B) == 6);
  CHECK_FALSE(odd.balanced());

  auto b = make_schedule(1, 13, Phase::BFirst);
  CHECK(b.cycle_at(0) == Cycle::B);
  CHECK(b.count(Cycle::B) == 7);

  auto half = make_schedule(1, 84, Phase::AFirst, 2);
  CHECK(half.horizon_days() == 42);
  CHECK(half.count(Cycle::A) == 42);

  CHECK_THROWS_AS(make_schedule(0, 10, Phase::AFirst), InvalidArgument);
  CHECK_THROWS_AS(make_schedule(1, 0, Phase::AFirst), InvalidArgument);
  CHECK_THROWS_AS(make_schedule(1, 10, Phase::AFirst, 3), InvalidArgument);
  CHECK(parse_phase("b_first") == Phase::BFirst);
  CHECK(!parse_phase("B"));
}

TEST_CASE("allocation examples") {
  auto a = allocate_budgets(Cents{6500}, {0.5});
  CHECK(a.male == Cents{3250});
  CHECK(a.female == Cents{3250});
  auto b = allocate_budgets(Cents{6500}, {0.5}, SideCpm{4.0, 6.0});
  CHECK(b.male == Cents{2600});
  CHECK(b.female == Cents{3900});
  auto c = allocate_budgets(Cents{6500}, {1.0}, SideCpm{4.0, 6.0});
  CHECK(c.male == Cents{6500});
  CHECK(c.female == Cents{0});
  auto odd = allocate_budgets(Cents{1001}, {0.5});
  CHECK(odd.male == Cents{501});
  CHECK(odd.female == Cents{500});

  CHECK_THROWS_AS(allocate_budgets(Cents{100}, {0.5}, SideCpm{0.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(allocate_budgets(Cents{100}, {0.5}, SideCpm{1.0, -2.0}), InvalidArgument);
  CHECK_THROWS_AS(allocate_budgets(Cents{-1}, {0.5}), InvalidArgument);
  CHECK_THROWS_AS(allocate_budgets(Cents{100}, {1.5}), InvalidArgument);
}

TEST_CASE("allocation conserves cents and buys the requested impression ratio") {
  gen::Engine e(31);
  for (int i = 0; i < 10000; ++i) {
    const Cents total{static_cast<std::int64_t>(gen::uint_in(e, 0, 10'000'000))};
    const DesiredRatio ratio{gen::real_in(e, 0, 1)};
    std::optional<SideCpm> cpm;
    if (gen::uint_in(e, 0, 1)) cpm = SideCpm{gen::real_in(e, 0.5, 50), gen::real_in(e, 0.5, 50)};
    const auto s = allocate_budgets(total, ratio, cpm);
    REQUIRE(s.male + s.female == total);
    REQUIRE(s.male >= Cents{0});
    REQUIRE(s.female >= Cents{0});
    if (cpm && total.value() > 100'000) {
      const double m_impr = s.male.dollars() / cpm->male, f_impr = s.female.dollars() / cpm->female;
      REQUIRE(m_impr / (m_impr + f_impr) == doctest::Approx(ratio.male_share).epsilon(1e-3));
    }
  }
}

TEST_CASE("build_split examples") {
  auto ua = build_split(original(), SplitVariant::UnknownAwareSplit, {0.5});
  REQUIRE(ua.campaigns.size() == 4);
  CHECK(ua.side_total(Side::Male) == Cents{3250});
  CHECK(ua.side_total(Side::Female) == Cents{3250});
  CHECK(ua.total() == Cents{6500});
  REQUIRE(ua.schedule);

  auto ds = build_split(original(), SplitVariant::DirectSplit, {0.5});
  REQUIRE(ds.campaigns.size() == 2);
  for (const auto& c : ds.campaigns) {
    CHECK(c.daily_budget == Cents{3250});
    CHECK_FALSE(c.cycle);
  }
  CHECK_FALSE(ds.schedule);

  auto all = build_split(original(), SplitVariant::AllUsers, {0.9});
  REQUIRE(all.campaigns.size() == 1);
  CHECK(all.campaigns[0] == original());
  CHECK(all.total() == Cents{6500});
}

TEST_CASE("unknown-aware split structure") {
  gen::Engine e(41);
  for (int i = 0; i < 10000; ++i) {
    auto o = original(Cents{static_cast<std::int64_t>(gen::uint_in(e, 0, 1'000'000))});
    const DesiredRatio ratio{gen::real_in(e, 0, 1)};
    SplitOptions opt;
    opt.horizon_slots = static_cast<std::uint32_t>(gen::uint_in(e, 1, 100));
    opt.period_slots = static_cast<std::uint32_t>(gen::uint_in(e, 1, 7));
    if (gen::uint_in(e, 0, 1)) opt.cpm = SideCpm{gen::real_in(e, 1, 20), gen::real_in(e, 1, 20)};
    const auto variant = gen::pick(e, std::array{SplitVariant::AllUsers, SplitVariant::DirectSplit,
                                                 SplitVariant::UnknownAwareSplit});
    auto plan = build_split(o, variant, ratio, opt);
    REQUIRE(plan.total() == o.daily_budget);
    Cents sum;
    for (const auto& c : plan.campaigns) {
      REQUIRE(plan.budgets.at(c.campaign_id) == c.daily_budget);
      sum += c.daily_budget;
    }
    REQUIRE(sum == o.daily_budget);
    if (variant != SplitVariant::UnknownAwareSplit) continue;

    REQUIRE(plan.campaigns.size() == 4);
    std::map<Targeting, std::optional<Cycle>> cycle;
    for (const auto& c : plan.campaigns) cycle[c.targeting] = c.cycle;
    REQUIRE(cycle.at(Targeting::Female) == Cycle::A);
    REQUIRE(cycle.at(Targeting::MaleUnknown) == Cycle::A);
    REQUIRE(cycle.at(Targeting::Male) == Cycle::B);
    REQUIRE(cycle.at(Targeting::FemaleUnknown) == Cycle::B);
    for (auto c : {Cycle::A, Cycle::B}) {
      int male_side = 0, female_side = 0;
      for (const auto& k : plan.campaigns)
        if (k.cycle == c) (side_of(k.targeting) == Side::Male ? male_side : female_side)++;
      REQUIRE(male_side == 1);
      REQUIRE(female_side == 1);
    }
    for (auto s : {Side::Male, Side::Female}) {
      Cents sg, sgu;
      for (const auto& k : plan.campaigns) {
        if (side_of(k.targeting) != s) continue;
        (granularity_of(k.targeting) == Granularity::SingleGender ? sg : sgu) += k.daily_budget;
      }
      REQUIRE((sg - sgu).value() >= 0);
      REQUIRE((sg - sgu).value() <= 1);
    }
    REQUIRE(plan.schedule->horizon_slots == opt.horizon_slots);
  }
}

TEST_CASE("capability gate") {
  SplitOptions no_exclude;
  no_exclude.supports_exclude_targeting = false;
  CHECK_NOTHROW(build_split(original(), SplitVariant::DirectSplit, {0.5}, no_exclude));
  CHECK_THROWS_AS(build_split(original(), SplitVariant::UnknownAwareSplit, {0.5}, no_exclude),
                  UnsupportedTargeting);
  auto male = original();
  male.targeting = Targeting::Male;
  CHECK_THROWS_AS(build_split(male, SplitVariant::DirectSplit, {0.5}), InvalidArgument);
}

TEST_CASE("rebalance examples") {
  auto plan = build_split(original(), SplitVariant::DirectSplit, {0.5});
  const auto& m = plan.campaigns[0];
  const auto& f = plan.campaigns[1];
  // CPM 4.00 and 6.00.
  std::vector<EngagementRecord> ledger{row(m.campaign_id, m.targeting, GroupLabel::Male, 1000, Cents{400}),
                                       row(f.campaign_id, f.targeting, GroupLabel::Female, 1000, Cents{600})};
  auto next = rebalance(plan, ledger, {0.5});
  CHECK(next.side_total(Side::Male) == Cents{2600});
  CHECK(next.side_total(Side::Female) == Cents{3900});
  CHECK(next.total() == Cents{6500});

  std::vector<EngagementRecord> even{row(m.campaign_id, m.targeting, GroupLabel::Male, 1000, Cents{500}),
                                     row(f.campaign_id, f.targeting, GroupLabel::Female, 2000, Cents{1000})};
  auto back = rebalance(next, even, {0.5});
  CHECK(back.side_total(Side::Male) == Cents{3250});
  CHECK(back.side_total(Side::Female) == Cents{3250});

  std::vector<EngagementRecord> one_side{row(m.campaign_id, m.targeting, GroupLabel::Male, 1000, Cents{500})};
  CHECK_THROWS_AS(rebalance(plan, one_side, {0.5}), InsufficientData);
  CHECK_THROWS_AS(rebalance(build_split(original(), SplitVariant::AllUsers, {0.5}), ledger, {0.5}),
                  InvalidArgument);
}

TEST_CASE("unknown engagement counts toward the buying side") {
  auto plan = build_split(original(), SplitVariant::UnknownAwareSplit, {0.5});
  std::vector<EngagementRecord> ledger;
  for (const auto& c : plan.campaigns) {
    for (auto l : labels_of(c.targeting)) {
      const bool female_side = side_of(c.targeting) == Side::Female;
      ledger.push_back(row(c.campaign_id, c.targeting, l, 500, Cents{female_side ? 300 : 200}));
    }
  }
  ledger.push_back(row("stranger", Targeting::All, GroupLabel::Male, 1'000'000, Cents{1}));
  const auto cpm = observed_side_cpm(plan, ledger);
  CHECK(cpm.male == doctest::Approx(4.0));
  CHECK(cpm.female == doctest::Approx(6.0));
}

TEST_CASE("rebalance is idempotent at its own fixed point") {
  gen::Engine e(53);
  for (int i = 0; i < 2000; ++i) {
    const double male_cpm = gen::real_in(e, 1, 20), female_cpm = gen::real_in(e, 1, 20);
    const DesiredRatio ratio{gen::real_in(e, 0.05, 0.95)};
    SplitOptions opt;
    opt.cpm = SideCpm{male_cpm, female_cpm};
    const auto variant = gen::uint_in(e, 0, 1) ? SplitVariant::DirectSplit : SplitVariant::UnknownAwareSplit;
    auto plan = build_split(original(Cents{static_cast<std::int64_t>(gen::uint_in(e, 1000, 100'000))}), variant,
                            ratio, opt);
    // A ledger whose CPMs are exactly the priors: spend 1,000,000 cents per side.
    std::vector<EngagementRecord> ledger;
    for (const auto& c : plan.campaigns) {
      const double cpm = side_of(c.targeting) == Side::Male ? male_cpm : female_cpm;
      const auto impressions = static_cast<std::uint64_t>(std::llround(1e7 / cpm));
      ledger.push_back(row(c.campaign_id, c.targeting, labels_of(c.targeting).front(), impressions,
                           Cents{1'000'000}));
    }
    auto next = rebalance(plan, ledger, ratio);
    REQUIRE(next.total() == plan.total());
    for (const auto& [id, b] : plan.budgets) REQUIRE(std::llabs((next.budgets.at(id) - b).value()) <= 1);
    REQUIRE(next.schedule == plan.schedule);
  }
}

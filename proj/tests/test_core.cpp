#include <doctest.h>

#include "skewkit/core.hpp"

using namespace skewkit;

TEST_CASE("cents parse and print") {
  CHECK(Cents::parse("65.00")->value() == 6500);
  CHECK(Cents::parse("0.40")->value() == 40);
  CHECK(Cents::parse("1234567.89")->value() == 123456789);
  for (auto bad : {"", "1", "1.5", "1.500", "01.00", "-1.00", "+1.00", "1,00", " 1.00", "1.0a", ".50", "1e2"})
    CHECK_MESSAGE(!Cents::parse(bad), bad);
  CHECK(Cents{6500}.str() == "65.00");
  CHECK(Cents{5}.str() == "0.05");
  CHECK(Cents{-40}.str() == "-0.40");
  CHECK(Cents::from_dollars(2.5).value() == 250);
  CHECK(Cents::from_dollars(0.125).value() == 13);
  CHECK(Cents{100} + Cents{250} == Cents{350});
}

TEST_CASE("dates are strict ISO calendar days") {
  auto d = Date::parse("2024-02-29");
  REQUIRE(d);
  CHECK(d->str() == "2024-02-29");
  CHECK((*d + 1).str() == "2024-03-01");
  CHECK(*Date::parse("1970-01-01") == Date{0});
  CHECK(*Date::parse("2024-01-08") - *Date::parse("2024-01-01") == 7);
  for (auto bad : {"2023-02-29", "2024-13-01", "2024-00-10", "2024-1-01", "2024/01/01", "20240101", "2024-01-32", ""})
    CHECK_MESSAGE(!Date::parse(bad), bad);
}

TEST_CASE("targeting tokens and label sets") {
  for (auto t : kAllTargetings) CHECK(parse_targeting(to_string(t)) == t);
  CHECK(to_string(Targeting::MaleUnknown) == "male_unknown");
  CHECK(!parse_targeting("unknown"));
  CHECK(targets(Targeting::All, GroupLabel::Unknown));
  CHECK(!targets(Targeting::Male, GroupLabel::Unknown));
  CHECK(targets(Targeting::FemaleUnknown, GroupLabel::Unknown));
  CHECK(labels_of(Targeting::FemaleUnknown) == std::vector{GroupLabel::Female, GroupLabel::Unknown});

  std::vector<GroupLabel> mu{GroupLabel::Unknown, GroupLabel::Male};
  CHECK(targeting_from_labels(mu) == Targeting::MaleUnknown);
  std::vector<GroupLabel> all{GroupLabel::Male, GroupLabel::Female, GroupLabel::Unknown};
  CHECK(targeting_from_labels(all) == Targeting::All);
  std::vector<GroupLabel> u{GroupLabel::Unknown}, mf{GroupLabel::Male, GroupLabel::Female}, none;
  CHECK_THROWS_AS(targeting_from_labels(u), InvalidArgument);
  CHECK_THROWS_AS(targeting_from_labels(mf), InvalidArgument);
  CHECK_THROWS_AS(targeting_from_labels(none), InvalidArgument);

  CHECK(!side_of(Targeting::All));
  CHECK(side_of(Targeting::FemaleUnknown) == Side::Female);
  CHECK(granularity_of(Targeting::Male) == Granularity::SingleGender);
  CHECK(granularity_of(Targeting::MaleUnknown) == Granularity::SingleGenderUnknown);
  CHECK(granularity_of(Targeting::All) == Granularity::AllUsers);
}

TEST_CASE("record validation") {
  EngagementRecord r{"c", Date{0}, Targeting::All, GroupLabel::Male, 10, 3, 1, Cents{250}};
  CHECK(validate_record(r).empty());

  r = {"c", Date{0}, Targeting::All, GroupLabel::Male, 5, 7, 0, Cents{100}};
  CHECK(validate_record(r) == std::vector{Violation::ClicksExceedImpressions});

  r = {"c", Date{0}, Targeting::All, GroupLabel::Male, 5, 0, 0, Cents{40}};
  CHECK(validate_record(r) == std::vector{Violation::SpendWithoutClicks});

  r = {"c", Date{0}, Targeting::Male, GroupLabel::Unknown, 5, 1, 2, Cents{-1}};
  CHECK(validate_record(r) == std::vector{Violation::ConversionsExceedClicks, Violation::NegativeSpend,
                                          Violation::LabelOutsideTargeting});
}

TEST_CASE("campaign validation") {
  CampaignConfig c{"c1", BiddingStrategy::MaxClicks, Cents{6500}, std::nullopt, Targeting::All, std::nullopt, ""};
  CHECK(validate_campaign(c).empty());
  c.target_cpa = Cents{250};
  CHECK(validate_campaign(c).size() == 1);
  c.bidding_strategy = BiddingStrategy::MaxConversions;
  CHECK(validate_campaign(c).empty());
  c.target_cpa.reset();
  CHECK(validate_campaign(c).size() == 1);
  c.target_cpa = Cents{0};
  CHECK(validate_campaign(c).size() == 1);
  c.target_cpa = Cents{250};
  c.campaign_id = "a,b";
  CHECK(validate_campaign(c).size() == 1);
  c.campaign_id = "ok";
  c.daily_budget = Cents{-1};
  CHECK(validate_campaign(c).size() == 1);
}

TEST_CASE("metric units") {
  EngagementRecord r{"c", Date{0}, Targeting::All, GroupLabel::Male, 10, 3, 1, Cents{250}};
  CHECK(metric_units(r, Metric::Impressions) == 10);
  CHECK(metric_units(r, Metric::Spend) == 250);
  r.spend = Cents{-50};
  CHECK(metric_units(r, Metric::Spend) == 0);
}

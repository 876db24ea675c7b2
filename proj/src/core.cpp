#include "skewkit/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace skewkit {

std::string_view to_string(GroupLabel label) {
  switch (label) {
    case GroupLabel::Male: return "male";
    case GroupLabel::Female: return "female";
    case GroupLabel::Unknown: return "unknown";
  }
  return "?";
}

std::optional<GroupLabel> parse_label(std::string_view text) {
  for (auto l : kAllLabels)
    if (to_string(l) == text) return l;
  return std::nullopt;
}

std::string_view to_string(LatentGender g) {
  switch (g) {
    case LatentGender::Male: return "male";
    case LatentGender::Female: return "female";
    case LatentGender::Other: return "other";
  }
  return "?";
}

// ---------------------------------------------------------------------------

std::optional<Cents> Cents::parse(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || text.size() - dot - 1 != 2) return std::nullopt;
  auto whole = text.substr(0, dot);
  auto frac = text.substr(dot + 1);
  auto all_digits = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
  // Canonical form only: no leading zeros on the integer part.
  if (whole.size() > 1 && whole.front() == '0') return std::nullopt;
  std::int64_t w = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (ec != std::errc{} || p != whole.data() + whole.size()) return std::nullopt;
  if (w > (INT64_MAX - 99) / 100) return std::nullopt;
  std::int64_t f = (frac[0] - '0') * 10 + (frac[1] - '0');
  return Cents{w * 100 + f};
}

Cents Cents::from_dollars(double dollars) {
  return Cents{static_cast<std::int64_t>(std::llround(dollars * 100.0))};
}

std::string Cents::str() const {
  std::int64_t v = value_;
  bool neg = v < 0;
  std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%llu.%02llu", neg ? "-" : "",
                static_cast<unsigned long long>(mag / 100), static_cast<unsigned long long>(mag % 100));
  return buf;
}

// ---------------------------------------------------------------------------
// Civil-calendar conversions (proleptic Gregorian).

namespace {

std::int32_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int>(doe) - 719468;
}

void civil_from_days(std::int32_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const int era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp < 10 ? mp + 3 : mp - 9;
  y = static_cast<int>(yoe) + era * 400 + (m <= 2);
}

unsigned days_in_month(int y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return m == 2 && leap ? 29 : kDays[m - 1];
}

}  // namespace

std::optional<Date> Date::from_ymd(int year, unsigned month, unsigned day) {
  if (year < 1 || year > 9999 || month < 1 || month > 12) return std::nullopt;
  if (day < 1 || day > days_in_month(year, month)) return std::nullopt;
  return Date{days_from_civil(year, month, day)};
}

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto num = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
      if (text[i] < '0' || text[i] > '9') return std::nullopt;
      v = v * 10 + (text[i] - '0');
    }
    return v;
  };
  auto y = num(0, 4), m = num(5, 2), d = num(8, 2);
  if (!y || !m || !d) return std::nullopt;
  return from_ymd(*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d));
}

std::string Date::str() const {
  int y;
  unsigned m, d;
  civil_from_days(days_, y, m, d);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
  return buf;
}

// ---------------------------------------------------------------------------

bool targets(Targeting t, GroupLabel label) {
  switch (t) {
    case Targeting::All: return true;
    case Targeting::Male: return label == GroupLabel::Male;
    case Targeting::Female: return label == GroupLabel::Female;
    case Targeting::MaleUnknown: return label != GroupLabel::Female;
    case Targeting::FemaleUnknown: return label != GroupLabel::Male;
  }
  return false;
}

std::vector<GroupLabel> labels_of(Targeting t) {
  std::vector<GroupLabel> out;
  for (auto l : kAllLabels)
    if (targets(t, l)) out.push_back(l);
  return out;
}

std::string_view to_string(Targeting t) {
  switch (t) {
    case Targeting::All: return "all";
    case Targeting::Male: return "male";
    case Targeting::Female: return "female";
    case Targeting::MaleUnknown: return "male_unknown";
    case Targeting::FemaleUnknown: return "female_unknown";
  }
  return "?";
}

std::optional<Targeting> parse_targeting(std::string_view text) {
  for (auto t : kAllTargetings)
    if (to_string(t) == text) return t;
  return std::nullopt;
}

Targeting targeting_from_labels(std::span<const GroupLabel> labels) {
  bool m = false, f = false, u = false;
  for (auto l : labels) {
    m |= l == GroupLabel::Male;
    f |= l == GroupLabel::Female;
    u |= l == GroupLabel::Unknown;
  }
  if (!m && !f && !u) throw InvalidArgument("targeting must not be empty");
  if (!m && !f) throw InvalidArgument("unknown users cannot be targeted on their own");
  if (m && f) {
    if (!u) throw InvalidArgument("targeting {male, female} without unknown is not supported");
    return Targeting::All;
  }
  if (m) return u ? Targeting::MaleUnknown : Targeting::Male;
  return u ? Targeting::FemaleUnknown : Targeting::Female;
}

std::optional<Side> side_of(Targeting t) {
  switch (t) {
    case Targeting::Male:
    case Targeting::MaleUnknown: return Side::Male;
    case Targeting::Female:
    case Targeting::FemaleUnknown: return Side::Female;
    case Targeting::All: return std::nullopt;
  }
  return std::nullopt;
}

std::string_view to_string(Side s) { return s == Side::Male ? "male_side" : "female_side"; }

Granularity granularity_of(Targeting t) {
  switch (t) {
    case Targeting::All: return Granularity::AllUsers;
    case Targeting::Male:
    case Targeting::Female: return Granularity::SingleGender;
    case Targeting::MaleUnknown:
    case Targeting::FemaleUnknown: return Granularity::SingleGenderUnknown;
  }
  return Granularity::AllUsers;
}

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::AllUsers: return "all_users";
    case Granularity::SingleGenderUnknown: return "single_gender_unknown";
    case Granularity::SingleGender: return "single_gender";
  }
  return "?";
}

// ---------------------------------------------------------------------------

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::ClicksExceedImpressions: return "clicks exceed impressions";
    case Violation::ConversionsExceedClicks: return "conversions exceed clicks";
    case Violation::SpendWithoutClicks: return "spend without clicks";
    case Violation::NegativeSpend: return "negative spend";
    case Violation::LabelOutsideTargeting: return "label outside targeting";
  }
  return "?";
}

std::vector<Violation> validate_record(const EngagementRecord& r) {
  std::vector<Violation> out;
  if (r.clicks > r.impressions) out.push_back(Violation::ClicksExceedImpressions);
  if (r.conversions > r.clicks) out.push_back(Violation::ConversionsExceedClicks);
  if (r.spend < Cents::zero()) out.push_back(Violation::NegativeSpend);
  if (r.spend > Cents::zero() && r.clicks == 0) out.push_back(Violation::SpendWithoutClicks);
  if (!targets(r.targeting, r.label)) out.push_back(Violation::LabelOutsideTargeting);
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(BiddingStrategy s) {
  return s == BiddingStrategy::MaxClicks ? "max_clicks" : "max_conversions";
}

std::optional<BiddingStrategy> parse_strategy(std::string_view text) {
  if (text == "max_clicks") return BiddingStrategy::MaxClicks;
  if (text == "max_conversions") return BiddingStrategy::MaxConversions;
  return std::nullopt;
}

std::string_view to_string(Cycle c) { return c == Cycle::A ? "A" : "B"; }

std::vector<std::string> validate_campaign(const CampaignConfig& c) {
  std::vector<std::string> issues;
  if (c.campaign_id.empty()) issues.emplace_back("campaign_id is empty");
  if (c.campaign_id.find_first_of(",\"\r\n") != std::string::npos)
    issues.emplace_back("campaign_id contains a CSV delimiter or quote");
  if (c.daily_budget < Cents::zero()) issues.emplace_back("daily budget is negative");
  bool conv = c.bidding_strategy == BiddingStrategy::MaxConversions;
  if (conv && !c.target_cpa) issues.emplace_back("max_conversions requires a target CPA");
  if (!conv && c.target_cpa) issues.emplace_back("target CPA is only valid with max_conversions");
  if (c.target_cpa && *c.target_cpa <= Cents::zero()) issues.emplace_back("target CPA must be positive");
  return issues;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::Impressions: return "impressions";
    case Metric::Spend: return "spend";
    case Metric::Clicks: return "clicks";
    case Metric::Conversions: return "conversions";
  }
  return "?";
}

std::optional<Metric> parse_metric(std::string_view text) {
  for (auto m : {Metric::Impressions, Metric::Spend, Metric::Clicks, Metric::Conversions})
    if (to_string(m) == text) return m;
  return std::nullopt;
}

std::uint64_t metric_units(const EngagementRecord& r, Metric metric) {
  switch (metric) {
    case Metric::Impressions: return r.impressions;
    case Metric::Clicks: return r.clicks;
    case Metric::Conversions: return r.conversions;
    case Metric::Spend: return r.spend.value() > 0 ? static_cast<std::uint64_t>(r.spend.value()) : 0;
  }
  return 0;
}

}  // namespace skewkit

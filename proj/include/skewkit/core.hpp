#pragma once

// Shared domain types: labels, money, dates, targeting sets and the
// engagement ledger row that every other module consumes.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace skewkit {

// ---------------------------------------------------------------------------
// Errors

struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Skew is a ratio over Male+Female units; both zero means no estimate exists.
struct UndefinedSkew : std::domain_error {
  using std::domain_error::domain_error;
};

struct UndefinedRate : std::domain_error {
  using std::domain_error::domain_error;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Labels

/// Platform-inferred demographic label. Unknown is a real value, not absence.
enum class GroupLabel : std::uint8_t { Male, Female, Unknown };

inline constexpr std::array<GroupLabel, 3> kAllLabels = {
    GroupLabel::Male, GroupLabel::Female, GroupLabel::Unknown};

std::string_view to_string(GroupLabel label);
std::optional<GroupLabel> parse_label(std::string_view text);

/// Simulation ground truth. Only deliverysim reads this.
enum class LatentGender : std::uint8_t { Male, Female, Other };

inline constexpr std::array<LatentGender, 3> kAllLatent = {
    LatentGender::Male, LatentGender::Female, LatentGender::Other};

std::string_view to_string(LatentGender g);

// ---------------------------------------------------------------------------
// Money

/// Fixed-point currency in cents.
class Cents {
 public:
  constexpr Cents() = default;
  constexpr explicit Cents(std::int64_t cents) : value_(cents) {}

  static constexpr Cents zero() { return Cents{0}; }

  /// Parses "12.34". Exactly two fraction digits, no sign, no exponent.
  static std::optional<Cents> parse(std::string_view text);

  /// Nearest cent to a dollar amount (half away from zero).
  static Cents from_dollars(double dollars);

  constexpr std::int64_t value() const { return value_; }
  constexpr double dollars() const { return static_cast<double>(value_) / 100.0; }

  /// Always two fraction digits, e.g. "65.00", "-0.40".
  std::string str() const;

  constexpr Cents& operator+=(Cents o) {
    value_ += o.value_;
    return *this;
  }
  constexpr Cents& operator-=(Cents o) {
    value_ -= o.value_;
    return *this;
  }
  friend constexpr Cents operator+(Cents a, Cents b) { return Cents{a.value_ + b.value_}; }
  friend constexpr Cents operator-(Cents a, Cents b) { return Cents{a.value_ - b.value_}; }
  friend constexpr auto operator<=>(Cents, Cents) = default;

 private:
  std::int64_t value_ = 0;
};

// ---------------------------------------------------------------------------
// Calendar days

/// Time-zone free calendar day, stored as days since 1970-01-01.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

  static std::optional<Date> from_ymd(int year, unsigned month, unsigned day);
  /// Strict ISO-8601 "YYYY-MM-DD".
  static std::optional<Date> parse(std::string_view text);

  constexpr std::int32_t days_since_epoch() const { return days_; }
  std::string str() const;

  friend constexpr Date operator+(Date d, std::int32_t n) { return Date{d.days_ + n}; }
  friend constexpr std::int32_t operator-(Date a, Date b) { return a.days_ - b.days_; }
  friend constexpr auto operator<=>(Date, Date) = default;

 private:
  std::int32_t days_ = 0;
};

// ---------------------------------------------------------------------------
// Targeting

/// The targeting sets an ad platform lets an advertiser express. Unknown can
/// only be reached together with one binary label (by excluding the other),
/// so {Unknown} alone is unrepresentable.
enum class Targeting : std::uint8_t { All, Male, Female, MaleUnknown, FemaleUnknown };

inline constexpr std::array<Targeting, 5> kAllTargetings = {
    Targeting::All, Targeting::Male, Targeting::Female, Targeting::MaleUnknown,
    Targeting::FemaleUnknown};

bool targets(Targeting t, GroupLabel label);
std::vector<GroupLabel> labels_of(Targeting t);

/// Canonical CSV tokens: all, male, female, male_unknown, female_unknown.
std::string_view to_string(Targeting t);
std::optional<Targeting> parse_targeting(std::string_view text);

/// Builds a targeting from a label set. Rejects the empty set, {Unknown}
/// alone, and {Male, Female} (not expressible in the canonical schema).
Targeting targeting_from_labels(std::span<const GroupLabel> labels);

/// Which binary side a split campaign serves. nullopt for All.
enum class Side : std::uint8_t { Male, Female };
std::optional<Side> side_of(Targeting t);
std::string_view to_string(Side s);

/// Granularity buckets used when reporting split results.
enum class Granularity : std::uint8_t { AllUsers, SingleGenderUnknown, SingleGender };
Granularity granularity_of(Targeting t);
std::string_view to_string(Granularity g);

// ---------------------------------------------------------------------------
// Ledger

/// One (campaign, date, label) row of aggregated engagement.
struct EngagementRecord {
  std::string campaign_id;
  Date date;
  Targeting targeting = Targeting::All;
  GroupLabel label = GroupLabel::Unknown;
  std::uint64_t impressions = 0;
  std::uint64_t clicks = 0;
  std::uint64_t conversions = 0;
  Cents spend;

  friend bool operator==(const EngagementRecord&, const EngagementRecord&) = default;
};

enum class Violation : std::uint8_t {
  ClicksExceedImpressions,
  ConversionsExceedClicks,
  SpendWithoutClicks,
  NegativeSpend,
  LabelOutsideTargeting,
};

std::string_view to_string(Violation v);

/// Every invariant the row breaks; empty means the row is consistent.
std::vector<Violation> validate_record(const EngagementRecord& record);

// ---------------------------------------------------------------------------
// Campaigns

enum class BiddingStrategy : std::uint8_t { MaxClicks, MaxConversions };

std::string_view to_string(BiddingStrategy s);
std::optional<BiddingStrategy> parse_strategy(std::string_view text);

enum class Cycle : std::uint8_t { A, B };
std::string_view to_string(Cycle c);

struct CampaignConfig {
  std::string campaign_id;
  BiddingStrategy bidding_strategy = BiddingStrategy::MaxClicks;
  /// Average daily budget. Cycle-bound campaigns may spend up to
  /// daily_budget / duty on an active day (see deliverysim).
  Cents daily_budget;
  std::optional<Cents> target_cpa;
  Targeting targeting = Targeting::All;
  /// nullopt = always on; otherwise active only in that cycle.
  std::optional<Cycle> cycle;
  std::string label;

  friend bool operator==(const CampaignConfig&, const CampaignConfig&) = default;
};

/// Returns human-readable problems; empty when the config is usable.
std::vector<std::string> validate_campaign(const CampaignConfig& campaign);

// ---------------------------------------------------------------------------
// Derived metrics

struct RateMetrics {
  double ctr = 0.0;  // clicks / impressions
  double cvr = 0.0;  // conversions / impressions
  double cpm = 0.0;  // dollars per 1,000 impressions
};

enum class Metric : std::uint8_t { Impressions, Spend, Clicks, Conversions };
std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view text);

/// Units of `metric` carried by a record. Spend counts cents.
std::uint64_t metric_units(const EngagementRecord& record, Metric metric);

struct SkewEstimate {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double level = 0.99;
  std::uint64_t n_focal = 0;
  std::uint64_t n_total = 0;
  Metric metric = Metric::Impressions;
  GroupLabel focal = GroupLabel::Male;
};

}  // namespace skewkit

#pragma once

// Scenario configuration: one JSON document with nested sections. Every key
// is known in advance; anything else is an error. Parsing collects all
// problems before failing so a user can fix a file in one pass.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skewkit/core.hpp"
#include "skewkit/deliverysim.hpp"
#include "skewkit/intervention.hpp"
#include "skewkit/metrics.hpp"
#include "skewkit/unknownsim.hpp"

namespace skewkit {

std::string_view tool_version();

inline constexpr Cents kDefaultDailyBudget{6500};
inline constexpr Cents kDefaultTargetCpa{250};

struct ConfigIssue {
  std::string path;  // e.g. "campaigns[1].daily_budget_usd"
  std::string reason;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<ConfigIssue> list);
  ConfigError(std::string path, std::string reason)
      : ConfigError(std::vector<ConfigIssue>{{std::move(path), std::move(reason)}}) {}
  std::vector<ConfigIssue> issues;
};

struct SimulationSettings {
  std::uint32_t horizon_days = 42;
  /// Leading days left out of audits.
  std::uint32_t warmup_days = 0;
  Date start_date = *Date::from_ymd(2024, 1, 1);
  std::uint32_t replications = 1;
  std::uint64_t seed = 1;
};

struct InterventionSettings {
  /// Variants run next to the all-users baseline.
  std::vector<SplitVariant> variants{SplitVariant::DirectSplit, SplitVariant::UnknownAwareSplit};
  DesiredRatio ratio;
  std::uint32_t period_slots = 1;
  std::uint32_t slots_per_day = 1;
  Phase phase = Phase::AFirst;
  bool supports_exclude_targeting = true;
  std::optional<SideCpm> cpm;
};

struct AuditSettings {
  double level = 0.99;
  WindowKind window = WindowKind::Weekly;
  GroupLabel focal = GroupLabel::Male;
  std::optional<double> baseline_skew;
};

struct MonteCarloSettings {
  std::vector<PriorModel> priors{PriorModel::of(PriorKind::BinomialSymmetric),
                                 PriorModel::of(PriorKind::BinomialInformative),
                                 PriorModel::of(PriorKind::NormalInformative),
                                 PriorModel::of(PriorKind::BinomialSimilarWeb)};
  std::size_t draws = 1000;
  std::uint64_t seed = 1;
  std::size_t bins = 50;
  std::optional<ObservedCounts> observed;
};

struct OutputSettings {
  std::optional<std::string> directory;
  bool csv = true;
  bool json = true;
};

struct ScenarioConfig {
  MarketModel market = MarketModel::calibration();
  std::vector<CampaignConfig> campaigns{default_campaign()};
  SimulationSettings simulation;
  InterventionSettings intervention;
  AuditSettings audit;
  MonteCarloSettings montecarlo;
  OutputSettings output;

  static CampaignConfig default_campaign();
};

/// Throws ConfigError listing every invalid field.
ScenarioConfig parse_config(const nlohmann::json& doc);
/// Throws IoError if the file cannot be read, ConfigError otherwise.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully resolved config, defaults included.
nlohmann::json to_json(const ScenarioConfig& config);

/// FNV-1a 64 over bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
/// Digest of the resolved config, so spelling out a default does not change it.
std::string config_digest(const ScenarioConfig& config);

/// The campaigns one variant runs: every all-users campaign replaced by its
/// split, other campaigns passed through as configured.
struct VariantSetup {
  SplitVariant variant = SplitVariant::AllUsers;
  std::vector<CampaignConfig> campaigns;
  std::optional<CycleSchedule> schedule;
};

/// The all-users baseline first, then each configured variant once.
std::vector<VariantSetup> expand_variants(const ScenarioConfig& config);

struct Advisory {
  std::string code;
  std::string path;
  std::string message;
};

/// Checks for settings known to distort delivery. Never throws on a parsed
/// config.
std::vector<Advisory> lint_config(const ScenarioConfig& config);

}  // namespace skewkit

#pragma once

// Subcommand implementations behind the skewkit binary. Each returns a
// process exit code and writes human-readable progress to `out`, problems to
// `err`, and report files to the output directory when one is configured.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "skewkit/config.hpp"

namespace skewkit {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

struct CommonOptions {
  std::optional<std::filesystem::path> input;
  std::optional<std::filesystem::path> config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<double> level;
  std::optional<std::uint64_t> draws;
  std::optional<WindowKind> window;
};

struct AuditOptions {
  std::optional<std::string> campaign;
  std::optional<double> baseline_skew;
};

struct MonteCarloOptions {
  std::optional<std::string> campaign;
  std::optional<ObservedCounts> counts;
};

struct PlanOptions {
  std::optional<SplitVariant> variant;
  std::optional<double> male_share;
  std::optional<Cents> budget;
  std::optional<SideCpm> cpm;
  bool no_exclude_targeting = false;
};

int cmd_audit(const CommonOptions& common, const AuditOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_montecarlo(const CommonOptions& common, const MonteCarloOptions& opts, std::ostream& out,
                   std::ostream& err);
int cmd_plan(const CommonOptions& common, const PlanOptions& opts, std::ostream& out, std::ostream& err);
int cmd_lint(const CommonOptions& common, std::ostream& out, std::ostream& err);

}  // namespace skewkit

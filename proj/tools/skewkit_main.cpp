// skewkit: audit ad-delivery skew across platform-inferred gender labels,
// simulate delivery, and plan budget-split campaigns.

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "skewkit/commands.hpp"

namespace {

using namespace skewkit;

void add_common(CLI::App* app, CommonOptions& o, std::string& window) {
  app->add_option("--input", o.input, "Engagement ledger CSV");
  app->add_option("--config", o.config, "Scenario config (JSON)");
  app->add_option("--seed", o.seed, "Random seed");
  app->add_option("--out", o.out, "Directory for report files");
  app->add_option("--level", o.level, "Confidence level (default 0.99)");
  app->add_option("--draws", o.draws, "Monte Carlo draws (default 1000)");
  app->add_option("--window", window, "Audit window")->check(CLI::IsMember({"daily", "weekly", "whole"}));
}

std::optional<ObservedCounts> parse_counts(const std::string& text) {
  ObservedCounts c;
  char comma1 = 0, comma2 = 0;
  std::istringstream in(text);
  if (!(in >> c.n_male >> comma1 >> c.n_female >> comma2 >> c.n_unknown) || comma1 != ',' || comma2 != ',')
    return std::nullopt;
  if (text.find('-') != std::string::npos) return std::nullopt;
  in >> std::ws;
  if (!in.eof()) return std::nullopt;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skewkit: gender-label delivery skew audits, simulation and split planning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version()));

  CommonOptions common;
  std::string window;

  auto* audit = app.add_subcommand("audit", "Skew estimates, parity verdicts and funnel rates for a ledger");
  add_common(audit, common, window);
  AuditOptions audit_opts;
  audit->add_option("--campaign", audit_opts.campaign, "Only rows of this campaign_id");
  audit->add_option("--baseline-skew", audit_opts.baseline_skew, "Earlier skew to compute a scaled reach delta against");

  auto* simulate = app.add_subcommand("simulate", "Run the all-users baseline and split variants on a synthetic market");
  add_common(simulate, common, window);

  auto* montecarlo = app.add_subcommand("montecarlo", "Distribution of skew once unknown-labelled users are resolved");
  add_common(montecarlo, common, window);
  MonteCarloOptions mc_opts;
  std::string counts;
  montecarlo->add_option("--campaign", mc_opts.campaign, "Only rows of this campaign_id");
  montecarlo->add_option("--counts", counts, "Observed impressions as MALE,FEMALE,UNKNOWN");

  auto* plan = app.add_subcommand("plan", "Budget-split campaign plan for an all-users campaign");
  add_common(plan, common, window);
  PlanOptions plan_opts;
  std::string variant, budget;
  std::optional<double> cpm_male, cpm_female;
  plan->add_option("--variant", variant, "Split variant")
      ->check(CLI::IsMember({"all_users", "direct_split", "unknown_aware_split"}));
  plan->add_option("--male-share", plan_opts.male_share, "Desired male share of delivery");
  plan->add_option("--budget", budget, "Daily budget in dollars, e.g. 65.00");
  plan->add_option("--cpm-male", cpm_male, "Observed male-side CPM in dollars");
  plan->add_option("--cpm-female", cpm_female, "Observed female-side CPM in dollars");
  plan->add_flag("--no-exclude-targeting", plan_opts.no_exclude_targeting,
                 "Platform cannot exclude a label, so unknown users cannot be targeted separately");

  auto* lint = app.add_subcommand("lint", "Advisories for settings that distort delivery");
  add_common(lint, common, window);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (!window.empty()) common.window = parse_window(window);

  if (*audit) return cmd_audit(common, audit_opts, std::cout, std::cerr);
  if (*simulate) return cmd_simulate(common, std::cout, std::cerr);
  if (*montecarlo) {
    if (!counts.empty()) {
      mc_opts.counts = parse_counts(counts);
      if (!mc_opts.counts) {
        std::cerr << "error: --counts must look like 5512,4488,10000\n";
        return kExitValidation;
      }
    }
    return cmd_montecarlo(common, mc_opts, std::cout, std::cerr);
  }
  if (*plan) {
    if (!variant.empty()) plan_opts.variant = parse_variant(variant);
    if (!budget.empty()) {
      plan_opts.budget = Cents::parse(budget);
      if (!plan_opts.budget) {
        std::cerr << "error: --budget must be a dollar amount like 65.00\n";
        return kExitValidation;
      }
    }
    if (cpm_male || cpm_female) plan_opts.cpm = SideCpm{cpm_male.value_or(0.0), cpm_female.value_or(0.0)};
    return cmd_plan(common, plan_opts, std::cout, std::cerr);
  }
  return cmd_lint(common, std::cout, std::cerr);
}

#include "skewkit/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "skewkit/csv.hpp"
#include "skewkit/deliverysim.hpp"
#include "skewkit/metrics.hpp"
#include "skewkit/unknownsim.hpp"

namespace skewkit {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScenarioConfig resolve_config(const CommonOptions& common) {
  ScenarioConfig cfg = common.config ? load_config(*common.config) : ScenarioConfig{};
  std::vector<ConfigIssue> issues;
  if (common.seed) cfg.simulation.seed = cfg.montecarlo.seed = *common.seed;
  if (common.level) {
    if (!(*common.level > 0.0 && *common.level < 1.0)) issues.push_back({"--level", "must lie strictly between 0 and 1"});
    else cfg.audit.level = *common.level;
  }
  if (common.draws) {
    if (*common.draws < 1) issues.push_back({"--draws", "must be >= 1"});
    else cfg.montecarlo.draws = *common.draws;
  }
  if (common.window) cfg.audit.window = *common.window;
  if (common.out) cfg.output.directory = common.out->string();
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return cfg;
}

// Report sink shared by every command. Files are written only when an output
// directory is configured.
class Reports {
 public:
  Reports(std::string command, const ScenarioConfig& cfg, std::uint64_t seed)
      : command_(std::move(command)), digest_(config_digest(cfg)), seed_(seed), cfg_(cfg) {
    if (cfg.output.directory) {
      dir_ = fs::path(*cfg.output.directory);
      std::error_code ec;
      fs::create_directories(*dir_, ec);
      if (ec || !fs::is_directory(*dir_)) throw IoError("cannot create output directory " + dir_->string());
    }
  }

  json meta() const {
    return {{"tool", "skewkit"},  {"version", std::string(tool_version())}, {"command", command_},
            {"seed", seed_},      {"config_digest", digest_}};
  }

  void csv(const std::string& name, const std::string& header, const std::vector<std::string>& rows) {
    if (!dir_ || !cfg_.output.csv) return;
    std::string body = "# skewkit " + std::string(tool_version()) + " command=" + command_ +
                       " seed=" + std::to_string(seed_) + " config_digest=" + digest_ + "\n";
    body += header + "\n";
    for (const auto& r : rows) body += r + "\n";
    put(name, body);
  }

  void ledger(const std::string& name, std::span<const EngagementRecord> records) {
    if (!dir_ || !cfg_.output.csv) return;
    write_csv(*dir_ / name, records);
    written_.push_back(name);
  }

  void summary(json body) {
    body["meta"] = meta();
    if (!dir_ || !cfg_.output.json) return;
    put("summary.json", body.dump(2) + "\n");
  }

  void list(std::ostream& out) const {
    if (!dir_) return;
    for (const auto& w : written_) out << "wrote " << (*dir_ / w).string() << "\n";
  }

 private:
  void put(const std::string& name, const std::string& body) {
    const fs::path p = *dir_ / name;
    std::ofstream f(p, std::ios::binary);
    f << body;
    f.flush();
    if (!f) throw IoError("cannot write " + p.string());
    written_.push_back(name);
  }

  std::string command_;
  std::string digest_;
  std::uint64_t seed_;
  const ScenarioConfig& cfg_;
  std::optional<fs::path> dir_;
  std::vector<std::string> written_;
};

// Maps exceptions to exit codes so every command reports failures the same way.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CsvSchemaError& e) {
    err << "error: invalid ledger: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const InsufficientData& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

json counts_json(const LabelCounts& c) {
  return {{"male", c.male}, {"female", c.female}, {"unknown", c.unknown}};
}

json estimate_json(const std::optional<SkewEstimate>& e) {
  if (!e) return {{"defined", false}};
  return {{"defined", true},
          {"skew", e->point},
          {"ci_low", e->ci_low},
          {"ci_high", e->ci_high},
          {"level", e->level},
          {"parity", parity_test(*e)},
          {"focal", to_string(e->focal)},
          {"metric", to_string(e->metric)}};
}

std::optional<SkewEstimate> try_estimate(const LabelCounts& c, GroupLabel focal, Metric metric, double level) {
  if (c.known() == 0) return std::nullopt;
  return estimate_skew(c, focal, metric, level);
}

std::string ci_basis(Metric m) {
  return m == Metric::Spend ? "cents (heuristic)" : std::string(to_string(m));
}

// Fields shared by every skew row: counts, estimate, parity verdict.
std::string estimate_cells(const LabelCounts& c, const std::optional<SkewEstimate>& e) {
  std::string s = std::to_string(c.male) + "," + std::to_string(c.female) + "," + std::to_string(c.unknown);
  if (!e) return s + ",,,,undefined";
  return s + "," + fixed(e->point) + "," + fixed(e->ci_low) + "," + fixed(e->ci_high) + "," +
         (parity_test(*e) ? "true" : "false");
}

std::vector<EngagementRecord> filter_campaign(std::vector<EngagementRecord> records,
                                              const std::optional<std::string>& campaign) {
  if (!campaign) return records;
  std::erase_if(records, [&](const EngagementRecord& r) { return r.campaign_id != *campaign; });
  return records;
}

double cpm_of(std::uint64_t impressions, Cents spend) {
  return impressions == 0 ? std::nan("") : 1000.0 * spend.dollars() / static_cast<double>(impressions);
}

json maybe(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

}  // namespace

// ---------------------------------------------------------------------------

int cmd_audit(const CommonOptions& common, const AuditOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = resolve_config(common);
    if (opts.baseline_skew) {
      if (!(*opts.baseline_skew >= 0.0 && *opts.baseline_skew <= 1.0))
        throw ConfigError("--baseline-skew", "must lie in [0, 1]");
      cfg.audit.baseline_skew = opts.baseline_skew;
    }
    if (!common.input) throw ConfigError("--input", "audit needs a ledger CSV");
    const std::string bytes = read_bytes(*common.input);
    std::istringstream in(bytes);
    IngestResult ingest = parse_csv(in);
    for (const auto& w : ingest.warnings) err << "warning: " << w.message() << "\n";

    const auto records = filter_campaign(std::move(ingest.records), opts.campaign);
    if (records.empty())
      throw ConfigError("--input", opts.campaign ? "no rows for campaign " + *opts.campaign : "ledger has no rows");

    const auto& a = cfg.audit;
    Reports reports("audit", cfg, cfg.simulation.seed);
    json summary;
    summary["input"] = {{"path", common.input->string()},
                        {"digest", fnv1a_hex(bytes)},
                        {"rows", records.size()},
                        {"campaign", opts.campaign ? json(*opts.campaign) : json(nullptr)}};
    json warnings = json::array();
    for (const auto& w : ingest.warnings)
      warnings.push_back({{"line", w.line}, {"violation", to_string(w.violation)}});
    summary["input"]["warnings"] = warnings;
    summary["window"] = to_string(a.window);
    summary["focal"] = to_string(a.focal);
    summary["level"] = a.level;

    std::vector<std::string> series_rows;
    json whole = json::object();
    json series = json::object();
    for (auto metric : {Metric::Impressions, Metric::Spend}) {
      const std::string name(to_string(metric));
      const auto counts = sum_by_label(records, metric);
      const auto est = try_estimate(counts, a.focal, metric, a.level);
      whole[name] = estimate_json(est);
      whole[name]["counts"] = counts_json(counts);
      whole[name]["ci_basis"] = ci_basis(metric);

      std::size_t undefined = 0, parity_true = 0, parity_false = 0;
      json windows = json::array();
      for (const auto& w : skew_series(records, a.window, metric, a.focal, a.level)) {
        if (!w.estimate) ++undefined;
        else if (parity_test(*w.estimate)) ++parity_true;
        else ++parity_false;
        series_rows.push_back(name + "," + w.start.str() + "," + w.end.str() + "," +
                              (w.partial ? "true" : "false") + "," + estimate_cells(w.counts, w.estimate));
        json wj = estimate_json(w.estimate);
        wj["start"] = w.start.str();
        wj["end"] = w.end.str();
        wj["partial"] = w.partial;
        wj["counts"] = counts_json(w.counts);
        windows.push_back(wj);
      }
      series[name] = {{"windows", windows},
                      {"undefined", undefined},
                      {"parity_true", parity_true},
                      {"parity_false", parity_false}};
      out << name << ": ";
      if (est)
        out << to_string(a.focal) << " share " << fixed(est->point, 4) << " [" << fixed(est->ci_low, 4) << ", "
            << fixed(est->ci_high, 4) << "] parity " << (parity_test(*est) ? "holds" : "rejected");
      else
        out << "undefined (no male or female units)";
      out << "; " << to_string(a.window) << " windows: " << parity_true << " parity, " << parity_false
          << " skewed, " << undefined << " undefined\n";
    }
    summary["whole"] = whole;
    summary["series"] = series;

    // Funnel rates per label.
    std::vector<std::string> rate_rows;
    json rates_json = json::object();
    for (auto label : kAllLabels) {
      FunnelTotals t;
      bool present = false;
      for (const auto& r : records)
        if (r.label == label) {
          present = true;
          t.impressions += r.impressions;
          t.clicks += r.clicks;
          t.conversions += r.conversions;
          t.spend += r.spend;
        }
      if (!present) continue;
      std::string row = std::string(to_string(label)) + "," + std::to_string(t.impressions) + "," +
                        std::to_string(t.clicks) + "," + std::to_string(t.conversions) + "," + t.spend.str();
      json lj = {{"impressions", t.impressions}, {"clicks", t.clicks}, {"conversions", t.conversions},
                 {"spend_usd", t.spend.str()}};
      if (t.impressions > 0) {
        const auto m = rates(t);
        row += "," + fixed(m.ctr) + "," + fixed(m.cvr) + "," + fixed(m.cpm, 4);
        lj["ctr"] = m.ctr;
        lj["cvr"] = m.cvr;
        lj["cpm_usd"] = m.cpm;
      } else {
        row += ",,,";
        lj["ctr"] = lj["cvr"] = lj["cpm_usd"] = nullptr;
      }
      rate_rows.push_back(row);
      rates_json[std::string(to_string(label))] = lj;
    }
    summary["rates_by_label"] = rates_json;

    if (a.baseline_skew) {
      const auto counts = sum_by_label(records, Metric::Impressions);
      const auto est = try_estimate(counts, a.focal, Metric::Impressions, a.level);
      if (est) {
        const auto delta = scaled_reach_delta(*a.baseline_skew, est->point, counts.known());
        summary["scaled_reach_delta"] = {{"baseline_skew", *a.baseline_skew},
                                         {"skew", est->point},
                                         {"known_impressions", counts.known()},
                                         {"delta", delta}};
        out << "scaled reach delta vs baseline " << fixed(*a.baseline_skew, 4) << ": " << delta << "\n";
      } else {
        summary["scaled_reach_delta"] = nullptr;
      }
    }

    reports.csv("skew_series.csv",
                "metric,window_start,window_end,partial,male,female,unknown,skew,ci_low,ci_high,parity",
                series_rows);
    reports.csv("rates_by_label.csv", "label,impressions,clicks,conversions,spend,ctr,cvr,cpm", rate_rows);
    reports.summary(summary);
    reports.list(out);
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------

int cmd_simulate(const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = resolve_config(common);
    const auto& sim = cfg.simulation;
    const auto& a = cfg.audit;
    Reports reports("simulate", cfg, sim.seed);

    std::vector<std::uint64_t> seeds(sim.replications);
    for (std::uint32_t r = 0; r < sim.replications; ++r) seeds[r] = sim.seed + r;
    const Date audit_from = sim.start_date + static_cast<std::int32_t>(sim.warmup_days);

    json summary;
    summary["simulation"] = to_json(cfg)["simulation"];
    summary["variants"] = json::array();
    std::vector<std::string> skew_rows, granularity_rows, cpm_rows;

    for (const auto& setup : expand_variants(cfg)) {
      const std::string vname(to_string(setup.variant));
      const CycleSchedule* sched = setup.schedule ? &*setup.schedule : nullptr;
      const auto ledgers = run_replications(setup.campaigns, cfg.market, sim.horizon_days, seeds, sched,
                                            sim.start_date);

      std::map<std::pair<Granularity, GroupLabel>, FunnelTotals> cpm_acc;
      json reps = json::array();
      double sum_skew = 0.0, sum_dev = 0.0;
      std::size_t defined = 0;
      for (std::size_t r = 0; r < ledgers.size(); ++r) {
        const auto& ledger = ledgers[r];
        reports.ledger(sim.replications == 1 ? "ledger_" + vname + ".csv"
                                             : "ledger_" + vname + "_rep" + std::to_string(r) + ".csv",
                       ledger);
        std::vector<EngagementRecord> audited;
        for (const auto& rec : ledger)
          if (rec.date >= audit_from) audited.push_back(rec);

        json rj = {{"replication", r}, {"seed", seeds[r]}};
        for (auto metric : {Metric::Impressions, Metric::Spend}) {
          const auto counts = sum_by_label(audited, metric);
          const auto est = try_estimate(counts, a.focal, metric, a.level);
          rj[std::string(to_string(metric))] = estimate_json(est);
          skew_rows.push_back(vname + "," + std::to_string(r) + "," + std::string(to_string(metric)) + "," +
                              estimate_cells(counts, est));
          if (metric == Metric::Impressions && est) {
            sum_skew += est->point;
            sum_dev += std::fabs(est->point - 0.5);
            ++defined;
          }
        }

        std::map<Granularity, std::vector<EngagementRecord>> by_gran;
        for (const auto& rec : audited) {
          by_gran[granularity_of(rec.targeting)].push_back(rec);
          auto& t = cpm_acc[{granularity_of(rec.targeting), rec.label}];
          t.impressions += rec.impressions;
          t.clicks += rec.clicks;
          t.spend += rec.spend;
        }
        for (const auto& [g, recs] : by_gran) {
          const auto counts = sum_by_label(recs, Metric::Impressions);
          granularity_rows.push_back(vname + "," + std::to_string(r) + "," + std::string(to_string(g)) + "," +
                                     estimate_cells(counts, try_estimate(counts, a.focal, Metric::Impressions, a.level)));
        }
        reps.push_back(rj);
      }

      json cpm_json = json::object();
      std::map<Granularity, FunnelTotals> gran_tot;
      for (const auto& [key, t] : cpm_acc) {
        const auto [g, label] = key;
        const double cpm = cpm_of(t.impressions, t.spend);
        cpm_rows.push_back(vname + "," + std::string(to_string(g)) + "," + std::string(to_string(label)) + "," +
                           std::to_string(t.impressions) + "," + std::to_string(t.clicks) + "," + t.spend.str() +
                           "," + (std::isnan(cpm) ? std::string() : fixed(cpm, 4)));
        cpm_json[std::string(to_string(g))][std::string(to_string(label))] = maybe(cpm);
        auto& gt = gran_tot[g];
        gt.impressions += t.impressions;
        gt.spend += t.spend;
      }
      for (const auto& [g, t] : gran_tot) {
        const double cpm = cpm_of(t.impressions, t.spend);
        cpm_rows.push_back(vname + "," + std::string(to_string(g)) + ",all," + std::to_string(t.impressions) +
                           ",," + t.spend.str() + "," + (std::isnan(cpm) ? std::string() : fixed(cpm, 4)));
        cpm_json[std::string(to_string(g))]["all"] = maybe(cpm);
      }

      json campaigns = json::array();
      for (const auto& c : setup.campaigns)
        campaigns.push_back({{"campaign_id", c.campaign_id},
                             {"targeting", to_string(c.targeting)},
                             {"daily_budget_usd", c.daily_budget.str()},
                             {"cycle", c.cycle ? json(std::string(to_string(*c.cycle))) : json(nullptr)}});
      json vj = {{"variant", vname}, {"campaigns", campaigns}, {"replications", reps}, {"cpm_usd", cpm_json}};
      vj["mean_impression_skew"] = defined ? json(sum_skew / static_cast<double>(defined)) : json(nullptr);
      vj["mean_abs_deviation_from_parity"] = defined ? json(sum_dev / static_cast<double>(defined)) : json(nullptr);
      summary["variants"].push_back(vj);

      out << vname << ": ";
      if (defined)
        out << "mean " << to_string(a.focal) << " impression share " << fixed(sum_skew / static_cast<double>(defined), 4)
            << " over " << defined << " replication(s)";
      else
        out << "no audited delivery";
      for (const auto& [g, t] : gran_tot) {
        const double cpm = cpm_of(t.impressions, t.spend);
        if (!std::isnan(cpm)) out << "; CPM " << to_string(g) << " " << fixed(cpm, 2);
      }
      out << "\n";
    }

    reports.csv("skew_by_variant.csv",
                "variant,replication,metric,male,female,unknown,skew,ci_low,ci_high,parity", skew_rows);
    reports.csv("skew_by_granularity.csv",
                "variant,replication,granularity,male,female,unknown,skew,ci_low,ci_high,parity",
                granularity_rows);
    reports.csv("cpm_by_granularity.csv", "variant,granularity,label,impressions,clicks,spend,cpm", cpm_rows);
    reports.summary(summary);
    reports.list(out);
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------

int cmd_montecarlo(const CommonOptions& common, const MonteCarloOptions& opts, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = resolve_config(common);
    const auto& mc = cfg.montecarlo;

    ObservedCounts observed;
    json source;
    if (opts.counts) {
      observed = *opts.counts;
      source = {{"kind", "counts"}};
    } else if (common.input) {
      const std::string bytes = read_bytes(*common.input);
      std::istringstream in(bytes);
      auto ingest = parse_csv(in);
      for (const auto& w : ingest.warnings) err << "warning: " << w.message() << "\n";
      const auto records = filter_campaign(std::move(ingest.records), opts.campaign);
      const auto c = sum_by_label(records, Metric::Impressions);
      observed = {c.male, c.female, c.unknown};
      source = {{"kind", "ledger"}, {"path", common.input->string()}, {"digest", fnv1a_hex(bytes)}};
    } else if (mc.observed) {
      observed = *mc.observed;
      source = {{"kind", "config"}};
    } else {
      throw ConfigError("--input", "montecarlo needs a ledger, --counts, or montecarlo.observed in the config");
    }

    Reports reports("montecarlo", cfg, mc.seed);
    json summary;
    summary["source"] = source;
    summary["observed"] = {{"male", observed.n_male}, {"female", observed.n_female}, {"unknown", observed.n_unknown}};
    summary["draws"] = mc.draws;
    summary["reference_lines"] = {
        {"observed_known_skew", observed.known() > 0
                                    ? json(static_cast<double>(observed.n_male) / static_cast<double>(observed.known()))
                                    : json(nullptr)},
        {"target", 0.5}};

    std::vector<std::string> hist_rows, summary_rows;
    json priors = json::array();
    std::size_t ok = 0;
    for (std::size_t i = 0; i < mc.priors.size(); ++i) {
      const auto& prior = mc.priors[i];
      const std::string name(to_string(prior.kind));
      json pj = {{"index", i}, {"kind", name}};
      try {
        // Each prior gets its own stream family so adding one does not
        // perturb the others.
        const auto dist = simulate_unknown_skew(observed, prior, mc.draws, derive_stream(mc.seed, i, 0x6d63));
        const auto s = summarize_distribution(dist, mc.bins);
        const double width = 1.0 / static_cast<double>(mc.bins);
        for (std::size_t b = 0; b < s.histogram.size(); ++b)
          hist_rows.push_back(std::to_string(i) + "," + name + "," + std::to_string(b) + "," +
                              fixed(static_cast<double>(b) * width) + "," +
                              fixed(static_cast<double>(b + 1) * width) + "," + std::to_string(s.histogram[b]));
        pj["status"] = "ok";
        pj["p"] = dist.prior.p_fixed ? json(*dist.prior.p_fixed) : json(nullptr);
        pj["summary"] = {{"mean", s.mean}, {"mode", s.mode}, {"q01", s.q01}, {"q50", s.q50},
                         {"q99", s.q99},   {"min", s.min},   {"max", s.max}};
        pj["histogram"] = s.histogram;
        summary_rows.push_back(std::to_string(i) + "," + name + ",ok," + fixed(s.mean) + "," + fixed(s.mode) + "," +
                               fixed(s.q01) + "," + fixed(s.q50) + "," + fixed(s.q99) + "," + fixed(s.min) + "," +
                               fixed(s.max) + ",");
        out << name << ": mean " << fixed(s.mean, 4) << ", 1%-99% [" << fixed(s.q01, 4) << ", " << fixed(s.q99, 4)
            << "]\n";
        ++ok;
      } catch (const InvalidArgument& e) {
        pj["status"] = "error";
        pj["error"] = e.what();
        summary_rows.push_back(std::to_string(i) + "," + name + ",error,,,,,,,," + e.what());
        err << "error: prior " << name << ": " << e.what() << "\n";
      }
      priors.push_back(pj);
    }
    summary["priors"] = priors;

    reports.csv("histogram.csv", "prior_index,prior,bin,bin_low,bin_high,count", hist_rows);
    reports.csv("distribution_summary.csv", "prior_index,prior,status,mean,mode,q01,q50,q99,min,max,error",
                summary_rows);
    reports.summary(summary);
    reports.list(out);
    return ok > 0 ? kExitOk : kExitValidation;
  });
}

// ---------------------------------------------------------------------------

int cmd_plan(const CommonOptions& common, const PlanOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = resolve_config(common);
    auto& iv = cfg.intervention;
    if (opts.male_share) {
      if (!(*opts.male_share >= 0.0 && *opts.male_share <= 1.0))
        throw ConfigError("--male-share", "must lie in [0, 1]");
      iv.ratio.male_share = *opts.male_share;
    }
    if (opts.cpm) {
      if (!(opts.cpm->male > 0.0) || !(opts.cpm->female > 0.0))
        throw ConfigError("--cpm-male/--cpm-female", "both must be given and > 0");
      iv.cpm = opts.cpm;
    }
    if (opts.no_exclude_targeting) iv.supports_exclude_targeting = false;

    SplitVariant variant = SplitVariant::UnknownAwareSplit;
    if (opts.variant) variant = *opts.variant;
    else
      for (auto v : iv.variants)
        if (v != SplitVariant::AllUsers) {
          variant = v;
          break;
        }

    SplitOptions so;
    so.supports_exclude_targeting = iv.supports_exclude_targeting;
    so.period_slots = iv.period_slots;
    so.slots_per_day = iv.slots_per_day;
    so.horizon_slots = cfg.simulation.horizon_days * iv.slots_per_day;
    so.phase = iv.phase;
    so.cpm = iv.cpm;

    Reports reports("plan", cfg, cfg.simulation.seed);
    std::vector<std::string> plan_rows;
    json plans = json::array();
    std::optional<CycleSchedule> schedule;
    std::vector<CampaignConfig> scheduled;
    std::size_t n = 0;
    for (auto original : cfg.campaigns) {
      if (original.targeting != Targeting::All) continue;
      if (opts.budget) original.daily_budget = *opts.budget;
      ++n;
      const auto plan = build_split(original, variant, iv.ratio, so);
      out << "campaign " << original.campaign_id << " (" << original.daily_budget.str() << "/day) -> "
          << to_string(variant) << "\n";
      json cj = json::array();
      for (const auto& c : plan.campaigns) {
        const std::string cycle = c.cycle ? std::string(to_string(*c.cycle)) : "always";
        const Cents b = plan.budgets.at(c.campaign_id);
        std::string labels;
        for (auto l : labels_of(c.targeting)) labels += (labels.empty() ? "" : "+") + std::string(to_string(l));
        out << "  " << c.campaign_id << "  target " << labels << "  budget " << b.str() << "/day  cycle " << cycle
            << "\n";
        plan_rows.push_back(original.campaign_id + "," + c.campaign_id + "," + std::string(to_string(c.targeting)) +
                            "," + labels + "," + std::string(to_string(c.bidding_strategy)) + "," + b.str() + "," +
                            (c.target_cpa ? c.target_cpa->str() : std::string()) + "," + cycle);
        cj.push_back({{"campaign_id", c.campaign_id},
                      {"targeting", to_string(c.targeting)},
                      {"bidding_strategy", to_string(c.bidding_strategy)},
                      {"daily_budget_usd", b.str()},
                      {"target_cpa_usd", c.target_cpa ? json(c.target_cpa->str()) : json(nullptr)},
                      {"cycle", c.cycle ? json(cycle) : json(nullptr)}});
        if (c.cycle) scheduled.push_back(c);
      }
      out << "  total " << plan.total().str() << "/day (male side " << plan.side_total(Side::Male).str()
          << ", female side " << plan.side_total(Side::Female).str() << ")\n";
      plans.push_back({{"original", original.campaign_id},
                       {"variant", to_string(variant)},
                       {"campaigns", cj},
                       {"total_usd", plan.total().str()}});
      if (plan.schedule) schedule = plan.schedule;
    }
    if (n == 0) throw ConfigError("campaigns", "plan needs at least one campaign that targets all users");

    json summary;
    summary["variant"] = to_string(variant);
    summary["male_share"] = iv.ratio.male_share;
    summary["cpm_usd"] = iv.cpm ? json{{"male", iv.cpm->male}, {"female", iv.cpm->female}} : json(nullptr);
    summary["plans"] = plans;

    if (schedule) {
      std::vector<std::string> rows;
      for (std::uint32_t s = 0; s < schedule->horizon_slots; ++s) {
        const Cycle cyc = schedule->cycle_at(s);
        std::string active;
        for (const auto& c : scheduled)
          if (*c.cycle == cyc) active += (active.empty() ? "" : " ") + c.campaign_id;
        const Date day = cfg.simulation.start_date + static_cast<std::int32_t>(s / schedule->slots_per_day);
        const std::string part = schedule->slots_per_day == 1 ? "day" : (s % 2 == 0 ? "am" : "pm");
        rows.push_back(std::to_string(s) + "," + day.str() + "," + part + "," + std::string(to_string(cyc)) + "," +
                       active);
      }
      reports.csv("schedule.csv", "slot,date,part,cycle,active_campaigns", rows);
      summary["schedule"] = {{"period_slots", schedule->period_slots},
                             {"slots_per_day", schedule->slots_per_day},
                             {"horizon_slots", schedule->horizon_slots},
                             {"phase", to_string(schedule->phase)},
                             {"slots_a", schedule->count(Cycle::A)},
                             {"slots_b", schedule->count(Cycle::B)}};
      out << "schedule: " << schedule->count(Cycle::A) << " slot(s) in cycle A, " << schedule->count(Cycle::B)
          << " in cycle B, alternating every " << schedule->period_slots << " slot(s)\n";
    }
    reports.csv("plan.csv", "original,campaign_id,targeting,labels,bidding_strategy,daily_budget,target_cpa,cycle",
                plan_rows);
    reports.summary(summary);
    reports.list(out);
    return kExitOk;
  });
}

// ---------------------------------------------------------------------------

int cmd_lint(const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ScenarioConfig cfg = resolve_config(common);
    const auto advisories = lint_config(cfg);
    Reports reports("lint", cfg, cfg.simulation.seed);
    json list = json::array();
    for (const auto& a : advisories) {
      out << a.code << " " << a.path << ": " << a.message << "\n";
      list.push_back({{"code", a.code}, {"path", a.path}, {"message", a.message}});
    }
    if (advisories.empty()) out << "no advisories\n";
    reports.summary({{"advisories", list}});
    reports.list(out);
    return kExitOk;
  });
}

}  // namespace skewkit

#include "skewkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "skewkit/csv.hpp"

#ifndef SKEWKIT_VERSION
#define SKEWKIT_VERSION "0.0.0"
#endif

namespace skewkit {

using json = nlohmann::json;

std::string_view tool_version() { return SKEWKIT_VERSION; }

namespace {

std::string summarize(const std::vector<ConfigIssue>& issues) {
  std::string s = "invalid configuration (" + std::to_string(issues.size()) + " issue" +
                  (issues.size() == 1 ? "" : "s") + ")";
  for (const auto& i : issues) s += "\n  " + (i.path.empty() ? "<root>" : i.path) + ": " + i.reason;
  return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> list)
    : std::runtime_error(summarize(list)), issues(std::move(list)) {}

CampaignConfig ScenarioConfig::default_campaign() {
  CampaignConfig c;
  c.campaign_id = "campaign";
  c.bidding_strategy = BiddingStrategy::MaxClicks;
  c.daily_budget = kDefaultDailyBudget;
  c.targeting = Targeting::All;
  return c;
}

namespace {

std::string join(const std::string& base, std::string_view key) {
  return base.empty() ? std::string(key) : base + "." + std::string(key);
}

std::string index(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

class Reader {
 public:
  void add(std::string path, std::string reason) { issues_.push_back({std::move(path), std::move(reason)}); }
  std::size_t count() const { return issues_.size(); }
  std::vector<ConfigIssue>& issues() { return issues_; }

  std::optional<double> number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      add(path, "must be a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      add(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> probability(const json& j, const std::string& path) {
    auto v = number(j, path);
    if (v && !(*v >= 0.0 && *v <= 1.0)) {
      add(path, "must lie in [0, 1]");
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> non_negative(const json& j, const std::string& path) {
    auto v = number(j, path);
    if (v && *v < 0.0) {
      add(path, "must be >= 0");
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::uint64_t> unsigned_int(const json& j, const std::string& path,
                                            std::uint64_t min = 0,
                                            std::uint64_t max = std::numeric_limits<std::uint64_t>::max()) {
    std::uint64_t v = 0;
    if (j.is_number_unsigned()) {
      v = j.get<std::uint64_t>();
    } else if (j.is_number_integer()) {
      add(path, "must be >= " + std::to_string(min));
      return std::nullopt;
    } else {
      add(path, "must be a whole number");
      return std::nullopt;
    }
    if (v < min || v > max) {
      add(path, max == std::numeric_limits<std::uint64_t>::max()
                    ? "must be >= " + std::to_string(min)
                    : "must lie in [" + std::to_string(min) + ", " + std::to_string(max) + "]");
      return std::nullopt;
    }
    return v;
  }

  // Dollar amounts: a number with at most two decimals, or a "12.34" string.
  std::optional<Cents> usd(const json& j, const std::string& path) {
    if (j.is_string()) {
      auto c = Cents::parse(j.get<std::string>());
      if (!c) add(path, "must be a dollar amount like \"65.00\"");
      return c;
    }
    auto v = non_negative(j, path);
    if (!v) return std::nullopt;
    const double scaled = *v * 100.0;
    if (scaled > 9.0e15) {
      add(path, "is too large");
      return std::nullopt;
    }
    const double whole = std::round(scaled);
    if (std::fabs(scaled - whole) > 1e-6) {
      add(path, "must have at most two decimal places");
      return std::nullopt;
    }
    return Cents{static_cast<std::int64_t>(whole)};
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (!j.is_string()) {
      add(path, "must be a string");
      return std::nullopt;
    }
    return j.get<std::string>();
  }

  std::optional<bool> boolean(const json& j, const std::string& path) {
    if (!j.is_boolean()) {
      add(path, "must be true or false");
      return std::nullopt;
    }
    return j.get<bool>();
  }

  template <typename Parse>
  auto token(const json& j, const std::string& path, Parse parse, std::string_view choices)
      -> decltype(parse(std::string_view{})) {
    auto s = string(j, path);
    if (!s) return std::nullopt;
    auto v = parse(*s);
    if (!v) add(path, "must be one of " + std::string(choices) + ", got \"" + *s + "\"");
    return v;
  }

 private:
  std::vector<ConfigIssue> issues_;
};

// Tracks which keys of one object were consumed so leftovers can be reported.
class Section {
 public:
  Section(const json& j, std::string path, Reader& r) : j_(j), path_(std::move(path)), r_(r) {
    ok_ = j_.is_object();
    if (!ok_) r_.add(path_, "must be an object");
  }

  template <typename F>
  void field(std::string_view key, F&& fn) {
    known_.emplace(key);
    if (!ok_) return;
    auto it = j_.find(std::string(key));
    if (it != j_.end()) fn(*it, join(path_, key));
  }

  void required(std::string_view key) {
    if (ok_ && !j_.contains(std::string(key))) r_.add(join(path_, key), "is required");
  }

  void finish() {
    if (!ok_) return;
    for (const auto& [k, v] : j_.items())
      if (!known_.count(k)) r_.add(join(path_, k), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  Reader& r_;
  bool ok_ = false;
  std::set<std::string, std::less<>> known_;
};

template <typename T, typename F>
void assign(std::optional<T> v, F&& set) {
  if (v) set(*v);
}

void read_per_label(Section& parent, std::string_view key, PerLabel<double>& out, Reader& r,
                    bool probability) {
  parent.field(key, [&](const json& j, const std::string& path) {
    Section s(j, path, r);
    for (auto l : kAllLabels) {
      s.field(to_string(l), [&](const json& v, const std::string& p) {
        assign(probability ? r.probability(v, p) : r.non_negative(v, p), [&](double x) { out[l] = x; });
      });
    }
    s.finish();
  });
}

void read_market(const json& j, const std::string& path, MarketModel& m, Reader& r) {
  const std::size_t before = r.count();
  Section s(j, path, r);
  s.field("daily_opportunities", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p, 0, 100'000'000), [&](std::uint64_t x) { m.daily_opportunities = x; });
  });
  bool mix_ok = true;
  s.field("latent_mix", [&](const json& v, const std::string& p) {
    const std::size_t mix_before = r.count();
    Section mix(v, p, r);
    for (std::size_t i = 0; i < kAllLatent.size(); ++i)
      mix.field(to_string(kAllLatent[i]), [&](const json& x, const std::string& q) {
        assign(r.probability(x, q), [&](double d) { m.latent_mix[i] = d; });
      });
    mix.finish();
    mix_ok = r.count() == mix_before;
  });
  s.field("inference", [&](const json& v, const std::string& p) {
    Section inf(v, p, r);
    inf.field("p_unknown_male", [&](const json& x, const std::string& q) {
      assign(r.probability(x, q), [&](double d) { m.inference.p_unknown_male = d; });
    });
    inf.field("p_unknown_female", [&](const json& x, const std::string& q) {
      assign(r.probability(x, q), [&](double d) { m.inference.p_unknown_female = d; });
    });
    inf.field("p_correct_given_known", [&](const json& x, const std::string& q) {
      assign(r.probability(x, q), [&](double d) { m.inference.p_correct_given_known = d; });
    });
    inf.finish();
  });
  s.field("cpc_base_usd", [&](const json& v, const std::string& p) {
    assign(r.usd(v, p), [&](Cents c) { m.cpc_base = c; });
  });
  read_per_label(s, "cpc_premium", m.cpc_premium, r, false);
  s.field("premium_scope", [&](const json& v, const std::string& p) {
    assign(r.token(v, p, parse_premium_scope, "all_campaigns, label_targeted"),
           [&](PremiumScope x) { m.premium_scope = x; });
  });
  s.field("cpc_dispersion", [&](const json& v, const std::string& p) {
    assign(r.non_negative(v, p), [&](double x) { m.cpc_dispersion = x; });
  });
  read_per_label(s, "ctr", m.ctr, r, true);
  read_per_label(s, "cvr_given_click", m.cvr_given_click, r, true);
  s.finish();

  double sum = 0.0;
  for (double x : m.latent_mix) sum += x;
  if (mix_ok && !(std::fabs(sum - 1.0) <= 1e-9)) r.add(join(path, "latent_mix"), "shares must sum to 1");
  else if (r.count() == before)
    for (const auto& i : m.validate()) r.add(path, i);
}

bool bad_id_char(char c) { return c == ',' || c == '"' || c == '\n' || c == '\r'; }

std::optional<Cycle> parse_cycle(std::string_view s) {
  if (s == "a" || s == "A") return Cycle::A;
  if (s == "b" || s == "B") return Cycle::B;
  return std::nullopt;
}

void read_campaigns(const json& j, const std::string& path, std::vector<CampaignConfig>& out,
                    Reader& r) {
  if (!j.is_array()) {
    r.add(path, "must be a list");
    return;
  }
  if (j.empty()) {
    r.add(path, "must list at least one campaign");
    return;
  }
  out.clear();
  std::set<std::string> ids;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string cp = index(path, i);
    CampaignConfig c = ScenarioConfig::default_campaign();
    c.campaign_id.clear();
    bool cpa_given = false;
    Section s(j[i], cp, r);
    s.required("campaign_id");
    s.field("campaign_id", [&](const json& v, const std::string& p) {
      auto id = r.string(v, p);
      if (!id) return;
      if (id->empty()) r.add(p, "must not be empty");
      else if (std::any_of(id->begin(), id->end(), bad_id_char))
        r.add(p, "must not contain commas, quotes or line breaks");
      else if (!ids.insert(*id).second) r.add(p, "duplicate campaign_id \"" + *id + "\"");
      c.campaign_id = *id;
    });
    s.field("bidding_strategy", [&](const json& v, const std::string& p) {
      assign(r.token(v, p, parse_strategy, "max_clicks, max_conversions"),
             [&](BiddingStrategy x) { c.bidding_strategy = x; });
    });
    s.field("daily_budget_usd", [&](const json& v, const std::string& p) {
      assign(r.usd(v, p), [&](Cents x) { c.daily_budget = x; });
    });
    s.field("target_cpa_usd", [&](const json& v, const std::string& p) {
      if (v.is_null()) return;
      cpa_given = true;
      auto cpa = r.usd(v, p);
      if (cpa && cpa->value() == 0) r.add(p, "must be > 0");
      else if (cpa) c.target_cpa = cpa;
    });
    s.field("targeting", [&](const json& v, const std::string& p) {
      assign(r.token(v, p, parse_targeting, "all, male, female, male_unknown, female_unknown"),
             [&](Targeting x) { c.targeting = x; });
    });
    s.field("cycle", [&](const json& v, const std::string& p) {
      if (v.is_null()) return;
      assign(r.token(v, p, parse_cycle, "a, b, null"), [&](Cycle x) { c.cycle = x; });
    });
    s.field("label", [&](const json& v, const std::string& p) {
      assign(r.string(v, p), [&](std::string x) { c.label = std::move(x); });
    });
    s.finish();

    if (c.bidding_strategy == BiddingStrategy::MaxClicks && cpa_given)
      r.add(join(cp, "target_cpa_usd"), "only max_conversions campaigns take a target CPA");
    if (c.bidding_strategy == BiddingStrategy::MaxConversions && !cpa_given)
      c.target_cpa = kDefaultTargetCpa;
    if (c.bidding_strategy == BiddingStrategy::MaxClicks) c.target_cpa.reset();
    out.push_back(std::move(c));
  }
}

void read_simulation(const json& j, const std::string& path, SimulationSettings& s, Reader& r) {
  Section sec(j, path, r);
  sec.field("horizon_days", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p, 1, 36'500), [&](std::uint64_t x) { s.horizon_days = static_cast<std::uint32_t>(x); });
  });
  sec.field("warmup_days", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p, 0, 36'500), [&](std::uint64_t x) { s.warmup_days = static_cast<std::uint32_t>(x); });
  });
  sec.field("start_date", [&](const json& v, const std::string& p) {
    auto str = r.string(v, p);
    if (!str) return;
    auto d = Date::parse(*str);
    if (!d) r.add(p, "must be an ISO date (YYYY-MM-DD)");
    else s.start_date = *d;
  });
  sec.field("replications", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p, 1, 100'000), [&](std::uint64_t x) { s.replications = static_cast<std::uint32_t>(x); });
  });
  sec.field("seed", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p), [&](std::uint64_t x) { s.seed = x; });
  });
  sec.finish();
}

void read_intervention(const json& j, const std::string& path, InterventionSettings& s, Reader& r) {
  Section sec(j, path, r);
  sec.field("variants", [&](const json& v, const std::string& p) {
    if (!v.is_array()) {
      r.add(p, "must be a list");
      return;
    }
    s.variants.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      assign(r.token(v[i], index(p, i), parse_variant, "all_users, direct_split, unknown_aware_split"),
             [&](SplitVariant x) {
               if (std::find(s.variants.begin(), s.variants.end(), x) == s.variants.end())
                 s.variants.push_back(x);
             });
  });
  sec.field("male_share", [&](const json& v, const std::string& p) {
    assign(r.probability(v, p), [&](double x) { s.ratio.male_share = x; });
  });
  sec.field("period_slots", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p, 1, 100'000), [&](std::uint64_t x) { s.period_slots = static_cast<std::uint32_t>(x); });
  });
  sec.field("slots_per_day", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p, 1, 2), [&](std::uint64_t x) { s.slots_per_day = static_cast<std::uint32_t>(x); });
  });
  sec.field("phase", [&](const json& v, const std::string& p) {
    assign(r.token(v, p, parse_phase, "a_first, b_first"), [&](Phase x) { s.phase = x; });
  });
  sec.field("supports_exclude_targeting", [&](const json& v, const std::string& p) {
    assign(r.boolean(v, p), [&](bool x) { s.supports_exclude_targeting = x; });
  });
  sec.field("cpm_usd", [&](const json& v, const std::string& p) {
    if (v.is_null()) return;
    SideCpm cpm;
    bool ok = true;
    Section c(v, p, r);
    c.required("male");
    c.required("female");
    for (auto side : {Side::Male, Side::Female}) {
      c.field(side == Side::Male ? "male" : "female", [&](const json& x, const std::string& q) {
        auto d = r.number(x, q);
        if (d && *d <= 0.0) r.add(q, "must be > 0");
        if (!d || *d <= 0.0) ok = false;
        else (side == Side::Male ? cpm.male : cpm.female) = *d;
      });
    }
    c.finish();
    if (ok && cpm.male > 0.0 && cpm.female > 0.0) s.cpm = cpm;
  });
  sec.finish();

  const bool wants_ua = std::find(s.variants.begin(), s.variants.end(),
                                  SplitVariant::UnknownAwareSplit) != s.variants.end();
  if (wants_ua && !s.supports_exclude_targeting)
    r.add(join(path, "variants"),
          "unknown_aware_split needs exclusion targeting, but supports_exclude_targeting is false");
}

void read_audit(const json& j, const std::string& path, AuditSettings& s, Reader& r) {
  Section sec(j, path, r);
  sec.field("level", [&](const json& v, const std::string& p) {
    auto x = r.number(v, p);
    if (x && !(*x > 0.0 && *x < 1.0)) r.add(p, "must lie strictly between 0 and 1");
    else if (x) s.level = *x;
  });
  sec.field("window", [&](const json& v, const std::string& p) {
    assign(r.token(v, p, parse_window, "daily, weekly, whole"), [&](WindowKind x) { s.window = x; });
  });
  sec.field("focal", [&](const json& v, const std::string& p) {
    auto l = r.token(v, p, parse_label, "male, female");
    if (l && *l == GroupLabel::Unknown) r.add(p, "must be male or female");
    else if (l) s.focal = *l;
  });
  sec.field("baseline_skew", [&](const json& v, const std::string& p) {
    if (v.is_null()) return;
    assign(r.probability(v, p), [&](double x) { s.baseline_skew = x; });
  });
  sec.finish();
}

void read_prior(const json& j, const std::string& path, std::vector<PriorModel>& out, Reader& r) {
  constexpr std::string_view kinds =
      "symmetric, informative, normal_informative, similarweb, symmetric_solve, similarweb_solve";
  if (j.is_string()) {
    assign(r.token(j, path, parse_prior, kinds), [&](PriorKind k) { out.push_back(PriorModel::of(k)); });
    return;
  }
  Section s(j, path, r);
  s.required("kind");
  std::optional<PriorModel> model;
  s.field("kind", [&](const json& v, const std::string& p) {
    assign(r.token(v, p, parse_prior, kinds), [&](PriorKind k) { model = PriorModel::of(k); });
  });
  std::optional<double> p_fixed, sigma;
  s.field("p", [&](const json& v, const std::string& p) {
    if (!v.is_null()) p_fixed = r.probability(v, p);
  });
  s.field("sigma", [&](const json& v, const std::string& p) {
    if (v.is_null()) return;
    sigma = r.number(v, p);
    if (sigma && *sigma <= 0.0) {
      r.add(p, "must be > 0");
      sigma.reset();
    }
  });
  s.finish();
  if (!model) return;
  if (p_fixed) {
    if (model->kind == PriorKind::BinomialInformative || model->kind == PriorKind::NormalInformative)
      r.add(join(path, "p"), "informative priors take p from the observed counts");
    else model->p_fixed = p_fixed;
  }
  if (sigma) {
    if (model->kind != PriorKind::NormalInformative) r.add(join(path, "sigma"), "only normal_informative takes sigma");
    else model->sigma_p = sigma;
  }
  out.push_back(*model);
}

void read_montecarlo(const json& j, const std::string& path, MonteCarloSettings& s, Reader& r) {
  Section sec(j, path, r);
  sec.field("priors", [&](const json& v, const std::string& p) {
    if (!v.is_array() || v.empty()) {
      r.add(p, "must be a non-empty list");
      return;
    }
    s.priors.clear();
    for (std::size_t i = 0; i < v.size(); ++i) read_prior(v[i], index(p, i), s.priors, r);
  });
  sec.field("draws", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p, 1, 100'000'000), [&](std::uint64_t x) { s.draws = x; });
  });
  sec.field("seed", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p), [&](std::uint64_t x) { s.seed = x; });
  });
  sec.field("bins", [&](const json& v, const std::string& p) {
    assign(r.unsigned_int(v, p, 1, 100'000), [&](std::uint64_t x) { s.bins = x; });
  });
  sec.field("observed", [&](const json& v, const std::string& p) {
    if (v.is_null()) return;
    ObservedCounts c;
    Section o(v, p, r);
    for (auto l : kAllLabels) {
      o.required(to_string(l));
      o.field(to_string(l), [&](const json& x, const std::string& q) {
        assign(r.unsigned_int(x, q), [&](std::uint64_t n) {
          (l == GroupLabel::Male ? c.n_male : l == GroupLabel::Female ? c.n_female : c.n_unknown) = n;
        });
      });
    }
    o.finish();
    s.observed = c;
  });
  sec.finish();
}

void read_output(const json& j, const std::string& path, OutputSettings& s, Reader& r) {
  Section sec(j, path, r);
  sec.field("directory", [&](const json& v, const std::string& p) {
    if (v.is_null()) return;
    auto d = r.string(v, p);
    if (d && d->empty()) r.add(p, "must not be empty");
    else if (d) s.directory = *d;
  });
  sec.field("formats", [&](const json& v, const std::string& p) {
    if (!v.is_array() || v.empty()) {
      r.add(p, "must be a non-empty list");
      return;
    }
    s.csv = s.json = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      auto f = r.string(v[i], index(p, i));
      if (!f) continue;
      if (*f == "csv") s.csv = true;
      else if (*f == "json") s.json = true;
      else r.add(index(p, i), "must be one of csv, json, got \"" + *f + "\"");
    }
  });
  sec.finish();
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  Reader r;
  ScenarioConfig cfg;
  Section root(doc, "", r);
  root.field("market", [&](const json& v, const std::string& p) { read_market(v, p, cfg.market, r); });
  root.field("campaigns", [&](const json& v, const std::string& p) { read_campaigns(v, p, cfg.campaigns, r); });
  root.field("simulation", [&](const json& v, const std::string& p) { read_simulation(v, p, cfg.simulation, r); });
  root.field("intervention", [&](const json& v, const std::string& p) { read_intervention(v, p, cfg.intervention, r); });
  root.field("audit", [&](const json& v, const std::string& p) { read_audit(v, p, cfg.audit, r); });
  root.field("montecarlo", [&](const json& v, const std::string& p) { read_montecarlo(v, p, cfg.montecarlo, r); });
  root.field("output", [&](const json& v, const std::string& p) { read_output(v, p, cfg.output, r); });
  root.finish();
  if (r.count() > 0) throw ConfigError(std::move(r.issues()));
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read error on " + path.string());
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

namespace {

json per_label_json(const PerLabel<double>& v) {
  return {{"male", v.male}, {"female", v.female}, {"unknown", v.unknown}};
}

json campaign_json(const CampaignConfig& c) {
  json j;
  j["campaign_id"] = c.campaign_id;
  j["bidding_strategy"] = to_string(c.bidding_strategy);
  j["daily_budget_usd"] = c.daily_budget.str();
  j["target_cpa_usd"] = c.target_cpa ? json(c.target_cpa->str()) : json(nullptr);
  j["targeting"] = to_string(c.targeting);
  j["cycle"] = c.cycle ? json(*c.cycle == Cycle::A ? "a" : "b") : json(nullptr);
  j["label"] = c.label;
  return j;
}

}  // namespace

json to_json(const ScenarioConfig& c) {
  json j;
  const auto& m = c.market;
  j["market"] = {
      {"daily_opportunities", m.daily_opportunities},
      {"latent_mix", {{"male", m.latent_mix[0]}, {"female", m.latent_mix[1]}, {"other", m.latent_mix[2]}}},
      {"inference",
       {{"p_unknown_male", m.inference.p_unknown_male},
        {"p_unknown_female", m.inference.p_unknown_female},
        {"p_correct_given_known", m.inference.p_correct_given_known}}},
      {"cpc_base_usd", m.cpc_base.str()},
      {"cpc_premium", per_label_json(m.cpc_premium)},
      {"premium_scope", to_string(m.premium_scope)},
      {"cpc_dispersion", m.cpc_dispersion},
      {"ctr", per_label_json(m.ctr)},
      {"cvr_given_click", per_label_json(m.cvr_given_click)},
  };
  j["campaigns"] = json::array();
  for (const auto& camp : c.campaigns) j["campaigns"].push_back(campaign_json(camp));

  const auto& s = c.simulation;
  j["simulation"] = {{"horizon_days", s.horizon_days}, {"warmup_days", s.warmup_days},
                     {"start_date", s.start_date.str()}, {"replications", s.replications},
                     {"seed", s.seed}};

  const auto& iv = c.intervention;
  json variants = json::array();
  for (auto v : iv.variants) variants.push_back(to_string(v));
  j["intervention"] = {{"variants", variants},
                       {"male_share", iv.ratio.male_share},
                       {"period_slots", iv.period_slots},
                       {"slots_per_day", iv.slots_per_day},
                       {"phase", to_string(iv.phase)},
                       {"supports_exclude_targeting", iv.supports_exclude_targeting},
                       {"cpm_usd", iv.cpm ? json{{"male", iv.cpm->male}, {"female", iv.cpm->female}}
                                          : json(nullptr)}};

  const auto& a = c.audit;
  j["audit"] = {{"level", a.level},
                {"window", to_string(a.window)},
                {"focal", to_string(a.focal)},
                {"baseline_skew", a.baseline_skew ? json(*a.baseline_skew) : json(nullptr)}};

  const auto& mc = c.montecarlo;
  json priors = json::array();
  for (const auto& p : mc.priors)
    priors.push_back({{"kind", to_string(p.kind)},
                      {"p", p.p_fixed ? json(*p.p_fixed) : json(nullptr)},
                      {"sigma", p.sigma_p ? json(*p.sigma_p) : json(nullptr)}});
  j["montecarlo"] = {{"priors", priors}, {"draws", mc.draws}, {"seed", mc.seed}, {"bins", mc.bins},
                     {"observed", mc.observed ? json{{"male", mc.observed->n_male},
                                                     {"female", mc.observed->n_female},
                                                     {"unknown", mc.observed->n_unknown}}
                                              : json(nullptr)}};

  json formats = json::array();
  if (c.output.csv) formats.push_back("csv");
  if (c.output.json) formats.push_back("json");
  j["output"] = {{"directory", c.output.directory ? json(*c.output.directory) : json(nullptr)},
                 {"formats", formats}};
  return j;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_digest(const ScenarioConfig& config) {
  // The output directory is where reports go, not what they contain.
  json j = to_json(config);
  j.erase("output");
  return fnv1a_hex(j.dump());
}

std::vector<VariantSetup> expand_variants(const ScenarioConfig& config) {
  const auto& iv = config.intervention;
  std::vector<SplitVariant> order{SplitVariant::AllUsers};
  for (auto v : iv.variants)
    if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);

  SplitOptions opts;
  opts.supports_exclude_targeting = iv.supports_exclude_targeting;
  opts.period_slots = iv.period_slots;
  opts.slots_per_day = iv.slots_per_day;
  opts.horizon_slots = config.simulation.horizon_days * iv.slots_per_day;
  opts.phase = iv.phase;
  opts.cpm = iv.cpm;

  std::vector<VariantSetup> out;
  for (auto v : order) {
    VariantSetup setup;
    setup.variant = v;
    for (const auto& c : config.campaigns) {
      if (c.targeting != Targeting::All) {
        setup.campaigns.push_back(c);
        continue;
      }
      auto plan = build_split(c, v, iv.ratio, opts);
      for (auto& child : plan.campaigns) setup.campaigns.push_back(std::move(child));
    }
    const bool cycles = std::any_of(setup.campaigns.begin(), setup.campaigns.end(),
                                    [](const CampaignConfig& c) { return c.cycle.has_value(); });
    if (cycles)
      setup.schedule = make_schedule(opts.period_slots, opts.horizon_slots, opts.phase, opts.slots_per_day);
    out.push_back(std::move(setup));
  }
  return out;
}

namespace {

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool concurrent(const CampaignConfig& a, const CampaignConfig& b) {
  return !a.cycle || !b.cycle || *a.cycle == *b.cycle;
}

bool overlap(Targeting a, Targeting b) {
  for (auto l : kAllLabels)
    if (targets(a, l) && targets(b, l)) return true;
  return false;
}

}  // namespace

std::vector<Advisory> lint_config(const ScenarioConfig& config) {
  std::vector<Advisory> out;
  const auto& m = config.market;

  // A CPA cap below what a label costs per conversion starves that label.
  std::vector<VariantSetup> setups;
  try {
    setups = expand_variants(config);
  } catch (const InvalidArgument&) {
    setups.clear();
  }
  std::set<std::pair<std::string, GroupLabel>> seen;
  auto check_cpa = [&](const CampaignConfig& c, const std::string& path) {
    if (c.bidding_strategy != BiddingStrategy::MaxConversions || !c.target_cpa) return;
    for (auto l : labels_of(c.targeting)) {
      if (!seen.emplace(c.campaign_id, l).second) continue;
      const bool open = m.premium_scope == PremiumScope::LabelTargeted && c.targeting == Targeting::All;
      const double price = m.cpc_base.dollars() * (open ? 1.0 : m.cpc_premium[l]);
      const double cvr = m.cvr_given_click[l];
      const double implied = cvr > 0.0 ? price / cvr : std::numeric_limits<double>::infinity();
      if (c.target_cpa->dollars() < implied)
        out.push_back({"cpa_below_market", path,
                       "campaign " + c.campaign_id + ": target CPA " + c.target_cpa->str() +
                           " is below the market-implied " +
                           (std::isfinite(implied) ? fmt(implied) : std::string("unbounded")) +
                           " per conversion for " + std::string(to_string(l)) +
                           "-labelled users, who will rarely be shown the ad"});
    }
  };
  for (std::size_t i = 0; i < config.campaigns.size(); ++i)
    check_cpa(config.campaigns[i], index("campaigns", i) + ".target_cpa_usd");
  for (const auto& s : setups)
    for (const auto& c : s.campaigns)
      for (std::size_t i = 0; i < config.campaigns.size(); ++i)
        if (c.campaign_id.rfind(config.campaigns[i].campaign_id + "-", 0) == 0)
          check_cpa(c, index("campaigns", i) + ".target_cpa_usd");

  const auto& sim = config.simulation;
  if (sim.warmup_days > 0 && sim.horizon_days <= sim.warmup_days)
    out.push_back({"horizon_shorter_than_warmup", "simulation.horizon_days",
                   "horizon of " + std::to_string(sim.horizon_days) + " day(s) does not outlast the " +
                       std::to_string(sim.warmup_days) +
                       "-day warm-up; delivery has not settled, so no audit data remains"});

  for (std::size_t i = 0; i < config.campaigns.size(); ++i)
    for (std::size_t k = i + 1; k < config.campaigns.size(); ++k) {
      const auto& a = config.campaigns[i];
      const auto& b = config.campaigns[k];
      if (!overlap(a.targeting, b.targeting) || !concurrent(a, b)) continue;
      const auto& winner = a.campaign_id < b.campaign_id ? a : b;
      const auto& loser = a.campaign_id < b.campaign_id ? b : a;
      out.push_back({"self_competition", index("campaigns", k),
                     "campaigns " + a.campaign_id + " and " + b.campaign_id +
                         " are eligible for the same users at the same time; " + winner.campaign_id +
                         " takes every shared opportunity and " + loser.campaign_id + " is starved"});
    }

  const auto& iv = config.intervention;
  bool cycles = std::any_of(config.campaigns.begin(), config.campaigns.end(),
                            [](const CampaignConfig& c) { return c.cycle.has_value(); });
  for (const auto& s : setups) cycles = cycles || s.schedule.has_value();
  if (cycles) {
    const auto sched = make_schedule(iv.period_slots, sim.horizon_days * iv.slots_per_day, iv.phase,
                                     iv.slots_per_day);
    if (!sched.balanced())
      out.push_back({"uneven_cycle_slots", "intervention.period_slots",
                     "cycle A gets " + std::to_string(sched.count(Cycle::A)) + " slot(s) and cycle B " +
                         std::to_string(sched.count(Cycle::B)) +
                         " over the horizon, so split campaigns get unequal delivery time"});
  }
  return out;
}

}  // namespace skewkit

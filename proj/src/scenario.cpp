#include "assettax/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace assettax {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

// Collects errors while walking the document; readers return fallbacks
// so one pass reports everything wrong, not just the first problem.
struct Walk {
  std::vector<ScenarioError>& errors;

  void fail(const YAML::Node& at, const std::string& path,
            const std::string& msg) {
    errors.push_back({at.IsDefined() ? line_of(at) : 0, path, msg});
  }
  void fail(const std::string& path, const std::string& msg) {
    errors.push_back({0, path, msg});
  }

  void check_keys(const YAML::Node& map, const std::string& path,
                  const std::set<std::string>& allowed) {
    if (!map.IsMap()) return;
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        fail(kv.first, path + "." + key, "unknown key");
      }
    }
  }

  bool require_map(const YAML::Node& n, const std::string& path) {
    if (n.IsMap()) return true;
    fail(n, path, "expected a mapping");
    return false;
  }

  double num(const YAML::Node& map, const std::string& path,
             const std::string& key, std::optional<double> fallback = {}) {
    const YAML::Node n = map[key];
    if (!n.IsDefined()) {
      if (fallback) return *fallback;
      fail(map, path + "." + key, "missing required number");
      return 0.0;
    }
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, path + "." + key, "expected a number");
      return 0.0;
    }
  }

  std::optional<double> opt_num(const YAML::Node& map, const std::string& path,
                                const std::string& key) {
    const YAML::Node n = map[key];
    if (!n.IsDefined()) return std::nullopt;
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      fail(n, path + "." + key, "expected a number");
      return std::nullopt;
    }
  }

  int integer(const YAML::Node& map, const std::string& path,
              const std::string& key, std::optional<int> fallback = {}) {
    const YAML::Node n = map[key];
    if (!n.IsDefined()) {
      if (fallback) return *fallback;
      fail(map, path + "." + key, "missing required integer");
      return 0;
    }
    try {
      return n.as<int>();
    } catch (const YAML::Exception&) {
      fail(n, path + "." + key, "expected an integer");
      return 0;
    }
  }

  std::string str(const YAML::Node& map, const std::string& path,
                  const std::string& key,
                  std::optional<std::string> fallback = {}) {
    const YAML::Node n = map[key];
    if (!n.IsDefined()) {
      if (fallback) return *fallback;
      fail(map, path + "." + key, "missing required string");
      return {};
    }
    try {
      return n.as<std::string>();
    } catch (const YAML::Exception&) {
      fail(n, path + "." + key, "expected a string");
      return {};
    }
  }

  std::vector<double> num_list(const YAML::Node& map, const std::string& path,
                               const std::string& key) {
    const YAML::Node n = map[key];
    std::vector<double> out;
    if (!n.IsDefined() || !n.IsSequence()) {
      fail(n.IsDefined() ? n : map, path + "." + key,
           "expected a list of numbers");
      return out;
    }
    for (const auto& item : n) {
      try {
        out.push_back(item.as<double>());
      } catch (const YAML::Exception&) {
        fail(item, path + "." + key, "expected a number");
      }
    }
    return out;
  }
};

// --- section parsers --------------------------------------------------------

void parse_distributions(Walk& w, const YAML::Node& sec, Scenario& s) {
  if (!sec.IsDefined()) return;
  if (!w.require_map(sec, "distributions")) return;
  for (const auto& kv : sec) {
    const std::string name = kv.first.as<std::string>();
    const std::string path = "distributions." + name;
    const YAML::Node body = kv.second;
    if (!w.require_map(body, path)) continue;
    const std::string kind = w.str(body, path, "kind");
    DistributionSpec d{name, Pareto{}};
    if (kind == "pareto") {
      w.check_keys(body, path, {"kind", "scale", "shape"});
      d.spec = Pareto{w.num(body, path, "scale"), w.num(body, path, "shape")};
    } else if (kind == "lognormal") {
      w.check_keys(body, path, {"kind", "mu", "sigma"});
      d.spec = LogNormal{w.num(body, path, "mu"), w.num(body, path, "sigma")};
    } else if (kind == "empirical") {
      w.check_keys(body, path, {"kind", "edges", "masses"});
      d.spec = PiecewiseEmpirical{w.num_list(body, path, "edges"),
                                  w.num_list(body, path, "masses")};
    } else {
      w.fail(body, path + ".kind",
             "unknown distribution kind '" + kind +
                 "' (pareto | lognormal | empirical)");
      continue;
    }
    s.distributions.push_back(std::move(d));
  }
}

void parse_weights(Walk& w, const YAML::Node& sec, Scenario& s) {
  if (!sec.IsDefined()) return;
  if (!w.require_map(sec, "weights")) return;
  for (const auto& kv : sec) {
    const std::string name = kv.first.as<std::string>();
    const std::string path = "weights." + name;
    const YAML::Node body = kv.second;
    if (!w.require_map(body, path)) continue;
    WeightSpec ws;
    ws.name = name;
    const std::string kind = w.str(body, path, "kind");
    ws.gstar = w.num(body, path, "gstar", 1.0);
    if (kind == "constant") {
      w.check_keys(body, path, {"kind", "gstar"});
      ws.kind = WeightKind::constant;
    } else if (kind == "power") {
      w.check_keys(body, path, {"kind", "gstar", "nu", "distribution"});
      ws.kind = WeightKind::power;
      ws.nu = w.num(body, path, "nu");
      ws.distribution = w.str(body, path, "distribution");
    } else if (kind == "step") {
      w.check_keys(body, path,
                   {"kind", "gstar", "threshold", "low", "high",
                    "distribution"});
      ws.kind = WeightKind::step;
      ws.threshold = w.num(body, path, "threshold");
      ws.low = w.num(body, path, "low");
      ws.high = w.num(body, path, "high");
      ws.distribution = w.str(body, path, "distribution");
    } else {
      w.fail(body, path + ".kind",
             "unknown weight kind '" + kind + "' (constant | power | step)");
      continue;
    }
    s.weights.push_back(std::move(ws));
  }
}

void parse_elasticities(Walk& w, const YAML::Node& sec, Scenario& s) {
  if (!sec.IsDefined()) return;
  if (!w.require_map(sec, "elasticities")) return;
  for (const auto& kv : sec) {
    const std::string name = kv.first.as<std::string>();
    const std::string path = "elasticities." + name;
    const YAML::Node body = kv.second;
    if (!w.require_map(body, path)) continue;
    ElasticitySpec es;
    es.name = name;
    const std::string kind = w.str(body, path, "kind");
    if (kind == "constant") {
      w.check_keys(body, path, {"kind", "value"});
      es.profile = ElasticityProfile::constant(w.num(body, path, "value"));
    } else if (kind == "piecewise") {
      w.check_keys(body, path, {"kind", "thresholds", "values"});
      es.profile.thresholds = w.num_list(body, path, "thresholds");
      es.profile.values = w.num_list(body, path, "values");
    } else {
      w.fail(body, path + ".kind",
             "unknown elasticity kind '" + kind + "' (constant | piecewise)");
      continue;
    }
    s.elasticities.push_back(std::move(es));
  }
}

std::optional<ScheduleKind> schedule_kind_from(const std::string& k) {
  if (k == "wage_tax") return ScheduleKind::wage_tax;
  if (k == "innovation_prize") return ScheduleKind::innovation_prize;
  if (k == "mineral_prize") return ScheduleKind::mineral_prize;
  if (k == "monopoly_prize") return ScheduleKind::monopoly_prize;
  return std::nullopt;
}

GridSpec parse_grid(Walk& w, const YAML::Node& body, const std::string& path) {
  GridSpec g;
  const YAML::Node n = body["grid"];
  if (!n.IsDefined()) {
    w.fail(body, path + ".grid", "missing required grid");
    return g;
  }
  if (!n.IsMap()) {
    w.fail(n, path + ".grid", "expected {start, stop, points}");
    return g;
  }
  w.check_keys(n, path + ".grid", {"start", "stop", "points"});
  g.start = w.num(n, path + ".grid", "start");
  g.stop = w.num(n, path + ".grid", "stop");
  g.points = w.integer(n, path + ".grid", "points");
  if (g.points < 2) {
    w.fail(n, path + ".grid.points", "need at least 2 grid points");
  }
  if (!(g.stop > g.start)) {
    w.fail(n, path + ".grid", "stop must exceed start");
  }
  return g;
}

void parse_schedules(Walk& w, const YAML::Node& sec, Scenario& s) {
  if (!sec.IsDefined()) return;
  if (!w.require_map(sec, "schedules")) return;
  for (const auto& kv : sec) {
    const std::string name = kv.first.as<std::string>();
    const std::string path = "schedules." + name;
    const YAML::Node body = kv.second;
    if (!w.require_map(body, path)) continue;
    w.check_keys(body, path,
                 {"kind", "distribution", "weights", "elasticity",
                  "floor_multiplier", "creation_cost", "grid"});
    ScheduleSpec sp;
    sp.name = name;
    const std::string kind = w.str(body, path, "kind");
    if (auto k = schedule_kind_from(kind)) {
      sp.kind = *k;
    } else {
      w.fail(body, path + ".kind", "unknown schedule kind '" + kind + "'");
      continue;
    }
    sp.distribution = w.str(body, path, "distribution");
    sp.weights = w.str(body, path, "weights");
    sp.elasticity = w.str(body, path, "elasticity");
    sp.floor_multiplier = w.num(body, path, "floor_multiplier", 3.0);
    sp.creation_cost = w.num(body, path, "creation_cost", 0.0);
    sp.grid = parse_grid(w, body, path);
    s.schedules.push_back(std::move(sp));
  }
}

void parse_agents(Walk& w, const YAML::Node& sec, Scenario& s) {
  if (!sec.IsDefined()) return;
  if (!sec.IsSequence()) {
    w.fail(sec, "agents", "expected a list");
    return;
  }
  int idx = 0;
  for (const auto& body : sec) {
    const std::string path = "agents[" + std::to_string(idx++) + "]";
    if (!w.require_map(body, path)) continue;
    w.check_keys(body, path,
                 {"name", "delta", "r", "k_init", "n", "wealth_utility",
                  "disutility", "schedule"});
    AgentSpec a;
    a.profile.name = w.str(body, path, "name");
    a.profile.delta = w.num(body, path, "delta");
    a.profile.r = w.num(body, path, "r");
    a.profile.k_init = w.num(body, path, "k_init", 0.0);
    a.profile.n = w.num(body, path, "n", 0.0);
    a.schedule = w.str(body, path, "schedule");

    const YAML::Node wu = body["wealth_utility"];
    if (wu.IsDefined() && wu.IsMap()) {
      w.check_keys(wu, path + ".wealth_utility", {"kind", "beta", "sigma"});
      const std::string kind = w.str(wu, path + ".wealth_utility", "kind");
      if (kind == "log") {
        a.profile.wealth_utility.kind = WealthUtility::Kind::log_form;
      } else if (kind == "power") {
        a.profile.wealth_utility.kind = WealthUtility::Kind::power_form;
        a.profile.wealth_utility.sigma =
            w.num(wu, path + ".wealth_utility", "sigma");
      } else {
        w.fail(wu, path + ".wealth_utility.kind",
               "unknown wealth utility kind '" + kind + "' (log | power)");
      }
      a.profile.wealth_utility.beta =
          w.num(wu, path + ".wealth_utility", "beta", 1.0);
    } else {
      w.fail(body, path + ".wealth_utility", "missing wealth_utility map");
    }

    const YAML::Node du = body["disutility"];
    if (du.IsDefined() && du.IsMap()) {
      w.check_keys(du, path + ".disutility", {"elasticity", "scale"});
      a.profile.disutility.elasticity =
          w.num(du, path + ".disutility", "elasticity");
      a.profile.disutility.scale = w.num(du, path + ".disutility", "scale", 1.0);
    } else {
      w.fail(body, path + ".disutility", "missing disutility map");
    }
    s.agents.push_back(std::move(a));
  }
}

std::optional<AssetCategory> category_from(const std::string& c) {
  if (c == "land") return AssetCategory::land_or_useful_privilege;
  if (c == "useless_privilege") return AssetCategory::useless_privilege;
  if (c == "capital") return AssetCategory::capital;
  if (c == "intellectual_property")
    return AssetCategory::intellectual_property;
  if (c == "mineral_deposit") return AssetCategory::mineral_deposit;
  if (c == "monopoly") return AssetCategory::unregulated_natural_monopoly;
  return std::nullopt;
}

std::string category_to(AssetCategory c) {
  switch (c) {
    case AssetCategory::land_or_useful_privilege:
      return "land";
    case AssetCategory::useless_privilege:
      return "useless_privilege";
    case AssetCategory::capital:
      return "capital";
    case AssetCategory::intellectual_property:
      return "intellectual_property";
    case AssetCategory::mineral_deposit:
      return "mineral_deposit";
    case AssetCategory::unregulated_natural_monopoly:
      return "monopoly";
  }
  return "?";
}

void parse_assets(Walk& w, const YAML::Node& sec, Scenario& s) {
  if (!sec.IsDefined()) return;
  if (!sec.IsSequence()) {
    w.fail(sec, "assets", "expected a list");
    return;
  }
  int idx = 0;
  for (const auto& body : sec) {
    const std::string path = "assets[" + std::to_string(idx++) + "]";
    if (!w.require_map(body, path)) continue;
    w.check_keys(body, path,
                 {"id", "category", "income_flow", "market_value",
                  "takeover_bid", "pv_net_investment", "creation_cost",
                  "mortgage_value", "restricted_activity_fee"});
    AssetRecord a;
    a.id = w.str(body, path, "id");
    const std::string cat = w.str(body, path, "category");
    if (auto c = category_from(cat)) {
      a.category = *c;
    } else {
      w.fail(body, path + ".category", "unknown category '" + cat + "'");
      continue;
    }
    a.income_flow = w.opt_num(body, path, "income_flow");
    a.market_value = w.opt_num(body, path, "market_value");
    a.takeover_bid = w.opt_num(body, path, "takeover_bid");
    a.pv_net_investment = w.opt_num(body, path, "pv_net_investment");
    a.creation_cost = w.opt_num(body, path, "creation_cost");
    a.mortgage_value = w.num(body, path, "mortgage_value", 0.0);
    a.restricted_activity_fee =
        w.opt_num(body, path, "restricted_activity_fee");
    try {
      a.validate();
    } catch (const std::exception& e) {
      w.fail(body, path, e.what());
      continue;
    }
    s.assets.push_back(std::move(a));
  }
}

void parse_policy(Walk& w, const YAML::Node& sec, Scenario& s) {
  if (!sec.IsDefined()) return;
  if (!w.require_map(sec, "policy")) return;
  const std::string path = "policy";
  w.check_keys(sec, path,
               {"land_tax_rate", "discount_rate", "floor_multiplier",
                "assessor_award_rate", "mineral_auction_fraction",
                "one_time_capital_levy", "innovation_schedule",
                "mineral_schedule", "monopoly_schedule", "welfare_weights",
                "welfare_distribution", "cost_conventions"});
  ScenarioPolicy& p = s.policy;
  p.config.land_tax_rate = w.num(sec, path, "land_tax_rate", 0.05);
  p.config.discount_rate = w.num(sec, path, "discount_rate", 0.005);
  p.config.floor_multiplier = w.num(sec, path, "floor_multiplier", 3.0);
  p.config.assessor_award_rate =
      w.num(sec, path, "assessor_award_rate", 0.01);
  p.config.mineral_auction_fraction =
      w.num(sec, path, "mineral_auction_fraction", 0.5);
  const YAML::Node levy = sec["one_time_capital_levy"];
  if (levy.IsDefined()) {
    if (levy.IsMap()) {
      w.check_keys(levy, path + ".one_time_capital_levy",
                   {"rate", "justification"});
      OneTimeCapitalLevy l;
      l.rate = w.num(levy, path + ".one_time_capital_levy", "rate");
      l.justification =
          w.str(levy, path + ".one_time_capital_levy", "justification", "");
      p.config.one_time_capital_levy = l;
    } else {
      w.fail(levy, path + ".one_time_capital_levy",
             "expected {rate, justification}");
    }
  }
  p.innovation_schedule = w.str(sec, path, "innovation_schedule", "");
  p.mineral_schedule = w.str(sec, path, "mineral_schedule", "");
  p.monopoly_schedule = w.str(sec, path, "monopoly_schedule", "");
  p.welfare_weights = w.str(sec, path, "welfare_weights", "");
  p.welfare_distribution = w.str(sec, path, "welfare_distribution", "");
  const YAML::Node conv = sec["cost_conventions"];
  if (conv.IsDefined()) {
    if (conv.IsMap()) {
      const std::string cpath = path + ".cost_conventions";
      w.check_keys(conv, cpath,
                   {"prospector_day", "prose_word", "children_prose_word",
                    "poetry_word", "music_beat", "art_sq_inch"});
      CostConventions& c = p.conventions;
      c.prospector_day = w.num(conv, cpath, "prospector_day", 500.0);
      c.prose_word = w.num(conv, cpath, "prose_word", 1.0);
      c.children_prose_word = w.num(conv, cpath, "children_prose_word", 2.0);
      c.poetry_word = w.num(conv, cpath, "poetry_word", 5.0);
      c.music_beat = w.num(conv, cpath, "music_beat", 1.0);
      c.art_sq_inch = w.num(conv, cpath, "art_sq_inch", 1.0);
    } else {
      w.fail(conv, path + ".cost_conventions", "expected a mapping");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> GridSpec::materialize() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    out.push_back(start + (stop - start) * i / double(points - 1));
  }
  return out;
}

std::string ScenarioError::str() const {
  std::ostringstream os;
  if (line > 0) os << "line " << line << ": ";
  os << path << ": " << message;
  return os.str();
}

const char* to_string(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::wage_tax:
      return "wage_tax";
    case ScheduleKind::innovation_prize:
      return "innovation_prize";
    case ScheduleKind::mineral_prize:
      return "mineral_prize";
    case ScheduleKind::monopoly_prize:
      return "monopoly_prize";
  }
  return "?";
}

const char* to_string(WeightKind k) {
  switch (k) {
    case WeightKind::constant:
      return "constant";
    case WeightKind::power:
      return "power";
    case WeightKind::step:
      return "step";
  }
  return "?";
}

ParseResult parse_scenario_text(const std::string& text) {
  ParseResult result;
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    result.errors.push_back({e.mark.line + 1, "<document>", e.msg});
    return result;
  }
  if (!root.IsMap()) {
    result.errors.push_back({1, "<document>", "expected a YAML mapping"});
    return result;
  }

  Walk w{result.errors};
  Scenario s;
  try {
    w.check_keys(root, "scenario",
                 {"distributions", "weights", "elasticities", "schedules",
                  "agents", "assets", "policy"});
    parse_distributions(w, root["distributions"], s);
    parse_weights(w, root["weights"], s);
    parse_elasticities(w, root["elasticities"], s);
    parse_schedules(w, root["schedules"], s);
    parse_agents(w, root["agents"], s);
    parse_assets(w, root["assets"], s);
    parse_policy(w, root["policy"], s);
  } catch (const YAML::Exception& e) {
    // Non-scalar map keys and similar structural oddities.
    result.errors.push_back({e.mark.line + 1, "<document>", e.msg});
    return result;
  }

  // Compile even when parsing already failed, so reference and invariant
  // errors surface in the same pass as syntactic ones.
  auto compiled = compile_scenario(s, result.errors, result.warnings);
  if (result.errors.empty()) {
    result.scenario = std::move(s);
    result.compiled = std::move(compiled);
  }
  return result;
}

ParseResult parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.errors.push_back({0, path, "cannot open scenario file"});
    return r;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

// ---------------------------------------------------------------------------

std::shared_ptr<CompiledScenario> compile_scenario(
    const Scenario& s, std::vector<ScenarioError>& errors,
    std::vector<std::string>& warnings) {
  auto out = std::make_shared<CompiledScenario>();
  const std::size_t initial_errors = errors.size();

  for (const DistributionSpec& d : s.distributions) {
    if (out->distributions.count(d.name)) {
      errors.push_back({0, "distributions." + d.name, "duplicate name"});
      continue;
    }
    try {
      auto model = std::visit(
          [](const auto& spec) {
            return std::make_shared<const DistributionModel>(spec);
          },
          d.spec);
      out->distributions.emplace(d.name, std::move(model));
    } catch (const std::exception& e) {
      errors.push_back({0, "distributions." + d.name, e.what()});
    }
  }

  const auto find_model =
      [&](const std::string& name,
          const std::string& path) -> std::shared_ptr<const DistributionModel> {
    const auto it = out->distributions.find(name);
    if (it == out->distributions.end()) {
      errors.push_back({0, path, "unknown distribution '" + name + "'"});
      return nullptr;
    }
    return it->second;
  };

  for (const WeightSpec& ws : s.weights) {
    const std::string path = "weights." + ws.name;
    if (out->weights.count(ws.name)) {
      errors.push_back({0, path, "duplicate name"});
      continue;
    }
    try {
      if (ws.kind == WeightKind::constant) {
        out->weights.emplace(ws.name,
                             WelfareWeightProfile::constant(ws.gstar));
      } else {
        auto model = find_model(ws.distribution, path + ".distribution");
        if (!model) continue;
        if (ws.kind == WeightKind::power) {
          out->weights.emplace(
              ws.name, WelfareWeightProfile::power(ws.nu, *model, ws.gstar));
        } else {
          out->weights.emplace(
              ws.name, WelfareWeightProfile::step(ws.threshold, ws.low,
                                                  ws.high, *model, ws.gstar));
        }
      }
    } catch (const std::exception& e) {
      errors.push_back({0, path, e.what()});
    }
  }

  for (const ElasticitySpec& es : s.elasticities) {
    const std::string path = "elasticities." + es.name;
    if (out->elasticities.count(es.name)) {
      errors.push_back({0, path, "duplicate name"});
      continue;
    }
    try {
      es.profile.validate();
      out->elasticities.emplace(es.name, es.profile);
    } catch (const std::exception& e) {
      errors.push_back({0, path, e.what()});
    }
  }

  for (const ScheduleSpec& sp : s.schedules) {
    const std::string path = "schedules." + sp.name;
    if (out->schedules.count(sp.name)) {
      errors.push_back({0, path, "duplicate name"});
      continue;
    }
    ScheduleParams params;
    params.kind = sp.kind;
    params.distribution = find_model(sp.distribution, path + ".distribution");
    const auto wit = out->weights.find(sp.weights);
    if (wit == out->weights.end()) {
      errors.push_back(
          {0, path + ".weights", "unknown weight profile '" + sp.weights + "'"});
      continue;
    }
    params.weights = wit->second;
    const auto eit = out->elasticities.find(sp.elasticity);
    if (eit == out->elasticities.end()) {
      errors.push_back({0, path + ".elasticity",
                        "unknown elasticity profile '" + sp.elasticity + "'"});
      continue;
    }
    params.elasticity = eit->second;
    params.floor_multiplier = sp.floor_multiplier;
    params.creation_cost = sp.creation_cost;
    if (!params.distribution) continue;
    try {
      params.validate();
      if (sp.grid.stop > params.distribution->truncation_point()) {
        errors.push_back({0, path + ".grid",
                          "grid extends beyond the distribution's tail "
                          "truncation point"});
        continue;
      }
      // Regime probe: sample the grid for out-of-regime points.
      bool anomalous = false;
      for (int i = 0; i < 9 && !anomalous; ++i) {
        const double x =
            sp.grid.start + (sp.grid.stop - sp.grid.start) * i / 8.0;
        anomalous = marginal(params, x).regime == Regime::out_of_regime;
      }
      if (anomalous) {
        warnings.push_back("schedules." + sp.name +
                           ": grid contains out-of-regime points (average "
                           "upper weight above 1)");
      }
    } catch (const std::exception& e) {
      errors.push_back({0, path, e.what()});
      continue;
    }
    out->schedules.emplace(sp.name, std::move(params));
    out->schedule_grids.emplace(sp.name, sp.grid);
  }

  for (const AgentSpec& a : s.agents) {
    const std::string path = "agents." + a.profile.name;
    try {
      a.profile.validate();
    } catch (const std::exception& e) {
      errors.push_back({0, path, e.what()});
      continue;
    }
    const auto it = out->schedules.find(a.schedule);
    if (it == out->schedules.end()) {
      errors.push_back(
          {0, path + ".schedule", "unknown schedule '" + a.schedule + "'"});
      continue;
    }
    if (it->second.kind == ScheduleKind::wage_tax) {
      // One earnings channel: prize earners only.
      errors.push_back({0, path + ".schedule",
                        "agents earn prizes, not wages; reference a prize "
                        "schedule"});
      continue;
    }
    out->agents.push_back(a);
  }

  out->assets = s.assets;
  out->policy = s.policy.config;
  out->conventions = s.policy.conventions;
  try {
    out->policy.validate();
    out->conventions.validate();
  } catch (const std::exception& e) {
    errors.push_back({0, "policy", e.what()});
  }

  // Prize schedule selection: explicit policy reference, else the unique
  // schedule of the kind.
  const auto select = [&](const std::string& explicit_name, ScheduleKind kind,
                          const char* label) -> std::optional<ScheduleParams> {
    if (!explicit_name.empty()) {
      const auto it = out->schedules.find(explicit_name);
      if (it == out->schedules.end()) {
        errors.push_back({0, std::string("policy.") + label,
                          "unknown schedule '" + explicit_name + "'"});
        return std::nullopt;
      }
      if (it->second.kind != kind) {
        errors.push_back({0, std::string("policy.") + label,
                          "schedule '" + explicit_name +
                              "' has the wrong kind"});
        return std::nullopt;
      }
      return it->second;
    }
    std::optional<ScheduleParams> found;
    for (const auto& [name, params] : out->schedules) {
      if (params.kind != kind) continue;
      if (found) {
        warnings.push_back(std::string("policy: multiple ") +
                           to_string(kind) +
                           " schedules; set policy." + label +
                           " to disambiguate (using the lexicographically "
                           "first)");
        break;
      }
      found = params;
    }
    return found;
  };
  out->prize_schedules.innovation =
      select(s.policy.innovation_schedule, ScheduleKind::innovation_prize,
             "innovation_schedule");
  out->prize_schedules.mineral = select(
      s.policy.mineral_schedule, ScheduleKind::mineral_prize, "mineral_schedule");
  out->prize_schedules.monopoly =
      select(s.policy.monopoly_schedule, ScheduleKind::monopoly_prize,
             "monopoly_schedule");

  if (!s.policy.welfare_weights.empty()) {
    const auto it = out->weights.find(s.policy.welfare_weights);
    if (it == out->weights.end()) {
      errors.push_back({0, "policy.welfare_weights",
                        "unknown weight profile '" + s.policy.welfare_weights +
                            "'"});
    } else if (s.policy.welfare_distribution.empty()) {
      errors.push_back({0, "policy.welfare_distribution",
                        "required when welfare_weights is set"});
    } else {
      const auto dit = out->distributions.find(s.policy.welfare_distribution);
      if (dit == out->distributions.end()) {
        errors.push_back({0, "policy.welfare_distribution",
                          "unknown distribution '" +
                              s.policy.welfare_distribution + "'"});
      } else {
        out->welfare_weights = &it->second;
        out->welfare_model = dit->second.get();
      }
    }
  }

  if (errors.size() != initial_errors) return out;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void emit_kv(YAML::Emitter& em, const char* key, double v) {
  em << YAML::Key << key << YAML::Value << fmt17(v);
}

void emit_kv(YAML::Emitter& em, const char* key, const std::string& v) {
  em << YAML::Key << key << YAML::Value << v;
}

void emit_opt(YAML::Emitter& em, const char* key,
              const std::optional<double>& v) {
  if (v) emit_kv(em, key, *v);
}

void emit_num_list(YAML::Emitter& em, const char* key,
                   const std::vector<double>& xs) {
  em << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double x : xs) em << fmt17(x);
  em << YAML::EndSeq;
}

}  // namespace

std::string serialize_scenario(const Scenario& s) {
  YAML::Emitter em;
  em << YAML::BeginMap;

  if (!s.distributions.empty()) {
    em << YAML::Key << "distributions" << YAML::Value << YAML::BeginMap;
    for (const DistributionSpec& d : s.distributions) {
      em << YAML::Key << d.name << YAML::Value << YAML::BeginMap;
      std::visit(
          [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, Pareto>) {
              emit_kv(em, "kind", "pareto");
              emit_kv(em, "scale", spec.scale);
              emit_kv(em, "shape", spec.shape);
            } else if constexpr (std::is_same_v<T, LogNormal>) {
              emit_kv(em, "kind", "lognormal");
              emit_kv(em, "mu", spec.mu);
              emit_kv(em, "sigma", spec.sigma);
            } else {
              emit_kv(em, "kind", "empirical");
              emit_num_list(em, "edges", spec.edges);
              emit_num_list(em, "masses", spec.masses);
            }
          },
          d.spec);
      em << YAML::EndMap;
    }
    em << YAML::EndMap;
  }

  if (!s.weights.empty()) {
    em << YAML::Key << "weights" << YAML::Value << YAML::BeginMap;
    for (const WeightSpec& ws : s.weights) {
      em << YAML::Key << ws.name << YAML::Value << YAML::BeginMap;
      emit_kv(em, "kind", to_string(ws.kind));
      if (ws.kind == WeightKind::power) {
        emit_kv(em, "nu", ws.nu);
      } else if (ws.kind == WeightKind::step) {
        emit_kv(em, "threshold", ws.threshold);
        emit_kv(em, "low", ws.low);
        emit_kv(em, "high", ws.high);
      }
      if (ws.kind != WeightKind::constant) {
        emit_kv(em, "distribution", ws.distribution);
      }
      emit_kv(em, "gstar", ws.gstar);
      em << YAML::EndMap;
    }
    em << YAML::EndMap;
  }

  if (!s.elasticities.empty()) {
    em << YAML::Key << "elasticities" << YAML::Value << YAML::BeginMap;
    for (const ElasticitySpec& es : s.elasticities) {
      em << YAML::Key << es.name << YAML::Value << YAML::BeginMap;
      if (es.profile.thresholds.empty()) {
        emit_kv(em, "kind", "constant");
        emit_kv(em, "value", es.profile.values.front());
      } else {
        emit_kv(em, "kind", "piecewise");
        emit_num_list(em, "thresholds", es.profile.thresholds);
        emit_num_list(em, "values", es.profile.values);
      }
      em << YAML::EndMap;
    }
    em << YAML::EndMap;
  }

  if (!s.schedules.empty()) {
    em << YAML::Key << "schedules" << YAML::Value << YAML::BeginMap;
    for (const ScheduleSpec& sp : s.schedules) {
      em << YAML::Key << sp.name << YAML::Value << YAML::BeginMap;
      emit_kv(em, "kind", to_string(sp.kind));
      emit_kv(em, "distribution", sp.distribution);
      emit_kv(em, "weights", sp.weights);
      emit_kv(em, "elasticity", sp.elasticity);
      emit_kv(em, "floor_multiplier", sp.floor_multiplier);
      emit_kv(em, "creation_cost", sp.creation_cost);
      em << YAML::Key << "grid" << YAML::Value << YAML::Flow << YAML::BeginMap;
      emit_kv(em, "start", sp.grid.start);
      emit_kv(em, "stop", sp.grid.stop);
      em << YAML::Key << "points" << YAML::Value << sp.grid.points;
      em << YAML::EndMap;
      em << YAML::EndMap;
    }
    em << YAML::EndMap;
  }

  if (!s.agents.empty()) {
    em << YAML::Key << "agents" << YAML::Value << YAML::BeginSeq;
    for (const AgentSpec& a : s.agents) {
      em << YAML::BeginMap;
      emit_kv(em, "name", a.profile.name);
      emit_kv(em, "delta", a.profile.delta);
      emit_kv(em, "r", a.profile.r);
      emit_kv(em, "k_init", a.profile.k_init);
      emit_kv(em, "n", a.profile.n);
      em << YAML::Key << "wealth_utility" << YAML::Value << YAML::Flow
         << YAML::BeginMap;
      if (a.profile.wealth_utility.kind == WealthUtility::Kind::log_form) {
        emit_kv(em, "kind", "log");
      } else {
        emit_kv(em, "kind", "power");
        emit_kv(em, "sigma", a.profile.wealth_utility.sigma);
      }
      emit_kv(em, "beta", a.profile.wealth_utility.beta);
      em << YAML::EndMap;
      em << YAML::Key << "disutility" << YAML::Value << YAML::Flow
         << YAML::BeginMap;
      emit_kv(em, "elasticity", a.profile.disutility.elasticity);
      emit_kv(em, "scale", a.profile.disutility.scale);
      em << YAML::EndMap;
      emit_kv(em, "schedule", a.schedule);
      em << YAML::EndMap;
    }
    em << YAML::EndSeq;
  }

  if (!s.assets.empty()) {
    em << YAML::Key << "assets" << YAML::Value << YAML::BeginSeq;
    for (const AssetRecord& a : s.assets) {
      em << YAML::BeginMap;
      emit_kv(em, "id", a.id);
      emit_kv(em, "category", category_to(a.category));
      emit_opt(em, "income_flow", a.income_flow);
      emit_opt(em, "market_value", a.market_value);
      emit_opt(em, "takeover_bid", a.takeover_bid);
      emit_opt(em, "pv_net_investment", a.pv_net_investment);
      emit_opt(em, "creation_cost", a.creation_cost);
      if (a.mortgage_value != 0.0) {
        emit_kv(em, "mortgage_value", a.mortgage_value);
      }
      emit_opt(em, "restricted_activity_fee", a.restricted_activity_fee);
      em << YAML::EndMap;
    }
    em << YAML::EndSeq;
  }

  em << YAML::Key << "policy" << YAML::Value << YAML::BeginMap;
  emit_kv(em, "land_tax_rate", s.policy.config.land_tax_rate);
  emit_kv(em, "discount_rate", s.policy.config.discount_rate);
  emit_kv(em, "floor_multiplier", s.policy.config.floor_multiplier);
  emit_kv(em, "assessor_award_rate", s.policy.config.assessor_award_rate);
  emit_kv(em, "mineral_auction_fraction",
          s.policy.config.mineral_auction_fraction);
  if (s.policy.config.one_time_capital_levy) {
    em << YAML::Key << "one_time_capital_levy" << YAML::Value
       << YAML::BeginMap;
    emit_kv(em, "rate", s.policy.config.one_time_capital_levy->rate);
    em << YAML::Key << "justification" << YAML::Value << YAML::DoubleQuoted
       << s.policy.config.one_time_capital_levy->justification;
    em << YAML::EndMap;
  }
  if (!s.policy.innovation_schedule.empty())
    emit_kv(em, "innovation_schedule", s.policy.innovation_schedule);
  if (!s.policy.mineral_schedule.empty())
    emit_kv(em, "mineral_schedule", s.policy.mineral_schedule);
  if (!s.policy.monopoly_schedule.empty())
    emit_kv(em, "monopoly_schedule", s.policy.monopoly_schedule);
  if (!s.policy.welfare_weights.empty())
    emit_kv(em, "welfare_weights", s.policy.welfare_weights);
  if (!s.policy.welfare_distribution.empty())
    emit_kv(em, "welfare_distribution", s.policy.welfare_distribution);
  if (!(s.policy.conventions == CostConventions{})) {
    em << YAML::Key << "cost_conventions" << YAML::Value << YAML::BeginMap;
    emit_kv(em, "prospector_day", s.policy.conventions.prospector_day);
    emit_kv(em, "prose_word", s.policy.conventions.prose_word);
    emit_kv(em, "children_prose_word",
            s.policy.conventions.children_prose_word);
    emit_kv(em, "poetry_word", s.policy.conventions.poetry_word);
    emit_kv(em, "music_beat", s.policy.conventions.music_beat);
    emit_kv(em, "art_sq_inch", s.policy.conventions.art_sq_inch);
    em << YAML::EndMap;
  }
  em << YAML::EndMap;

  em << YAML::EndMap;
  return std::string(em.c_str()) + "\n";
}

}  // namespace assettax

#pragma once

// Scenario files: a hierarchical YAML document with named sections
// (distributions, weights, elasticities, schedules, agents, assets,
// policy) and cross-references by name. Parsing is strict -- unknown
// keys are rejected -- and collects every error (with line or field
// locus) instead of stopping at the first.
//
// Two layers: Scenario is the syntactic object graph (serializable,
// round-trips exactly); CompiledScenario is the resolved semantic graph
// ready for the engines.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "assettax/agent.hpp"
#include "assettax/policy.hpp"
#include "assettax/schedule.hpp"

namespace assettax {

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;

  std::vector<double> materialize() const;  // evenly spaced, inclusive
  bool operator==(const GridSpec&) const = default;
};

struct DistributionSpec {
  std::string name;
  std::variant<Pareto, LogNormal, PiecewiseEmpirical> spec;
  bool operator==(const DistributionSpec&) const = default;
};

struct WeightSpec {
  std::string name;
  WeightKind kind = WeightKind::constant;
  double nu = 0.0;         // power
  double threshold = 0.0;  // step
  double low = 1.0;
  double high = 1.0;
  double gstar = 1.0;
  std::string distribution;  // normalization reference (power/step)
  bool operator==(const WeightSpec&) const = default;
};

struct ElasticitySpec {
  std::string name;
  ElasticityProfile profile;
  bool operator==(const ElasticitySpec&) const = default;
};

struct ScheduleSpec {
  std::string name;
  ScheduleKind kind = ScheduleKind::wage_tax;
  std::string distribution;
  std::string weights;
  std::string elasticity;
  double floor_multiplier = 3.0;
  double creation_cost = 0.0;
  GridSpec grid;
  bool operator==(const ScheduleSpec&) const = default;
};

struct AgentSpec {
  AgentProfile profile;
  std::string schedule;
  bool operator==(const AgentSpec&) const = default;
};

struct ScenarioPolicy {
  PolicyConfig config;
  CostConventions conventions;
  // Optional explicit schedule references for the prize categories; when
  // empty the unique schedule of the matching kind is used.
  std::string innovation_schedule;
  std::string mineral_schedule;
  std::string monopoly_schedule;
  // Optional report weighting.
  std::string welfare_weights;
  std::string welfare_distribution;
  bool operator==(const ScenarioPolicy&) const = default;
};

struct Scenario {
  std::vector<DistributionSpec> distributions;
  std::vector<WeightSpec> weights;
  std::vector<ElasticitySpec> elasticities;
  std::vector<ScheduleSpec> schedules;
  std::vector<AgentSpec> agents;
  std::vector<AssetRecord> assets;
  ScenarioPolicy policy;
  bool operator==(const Scenario&) const = default;
};

struct ScenarioError {
  int line = 0;  // 1-based; 0 when the locus is a field path only
  std::string path;
  std::string message;
  std::string str() const;
};

struct CompiledScenario {
  std::map<std::string, std::shared_ptr<const DistributionModel>>
      distributions;
  std::map<std::string, WelfareWeightProfile> weights;
  std::map<std::string, ElasticityProfile> elasticities;
  std::map<std::string, ScheduleParams> schedules;
  std::map<std::string, GridSpec> schedule_grids;
  std::vector<AgentSpec> agents;  // schedule reference resolved/validated
  std::vector<AssetRecord> assets;
  PolicyConfig policy;
  CostConventions conventions;
  PrizeScheduleSet prize_schedules;
  const WelfareWeightProfile* welfare_weights = nullptr;  // into weights
  const DistributionModel* welfare_model = nullptr;       // into distributions
};

struct ParseResult {
  std::optional<Scenario> scenario;
  std::shared_ptr<CompiledScenario> compiled;
  std::vector<ScenarioError> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

ParseResult parse_scenario_file(const std::string& path);
ParseResult parse_scenario_text(const std::string& text);

// Canonical serialization; parse(serialize(s)) reproduces s exactly.
std::string serialize_scenario(const Scenario& s);

// Resolution + validation of an already-parsed scenario. Appends errors
// (field loci) and warnings (e.g. out-of-regime schedule points).
std::shared_ptr<CompiledScenario> compile_scenario(
    const Scenario& s, std::vector<ScenarioError>& errors,
    std::vector<std::string>& warnings);

const char* to_string(ScheduleKind k);
const char* to_string(WeightKind k);

}  // namespace assettax

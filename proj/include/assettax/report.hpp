#pragma once

// Rendering of engine results: policy reports as JSON and aligned text,
// schedule tables and agent steady states as CSV. All numeric output is
// emitted at full precision (17 significant digits) so downstream diffs
// are exact.

#include <string>
#include <vector>

#include <json.hpp>

#include "assettax/agent.hpp"
#include "assettax/policy.hpp"
#include "assettax/schedule.hpp"

namespace assettax {

std::string format_full(double v);  // %.17g

nlohmann::json report_to_json(const RevenueReport& report,
                              const PolicyConfig& config);
std::string report_to_text(const RevenueReport& report,
                           const PolicyConfig& config);

// Columns: x, marginal, total, regime_flag (0 ok, 1 out of regime).
std::string schedule_to_csv(const IntegratedSchedule& schedule);

struct AgentSolution {
  std::string name;
  std::string schedule;
  SteadyState state;
};

std::string steady_states_to_csv(const std::vector<AgentSolution>& solutions);
nlohmann::json steady_states_to_json(
    const std::vector<AgentSolution>& solutions);
std::string steady_states_to_text(
    const std::vector<AgentSolution>& solutions);

}  // namespace assettax

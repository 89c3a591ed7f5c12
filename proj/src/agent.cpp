#include "assettax/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "assettax/kernels.hpp"
#include "assettax/numerics.hpp"

namespace assettax {

// ---------------------------------------------------------------------------
// Functional families
// ---------------------------------------------------------------------------

double WealthUtility::value(double k) const {
  if (kind == Kind::log_form) return beta * std::log(k);
  return beta * std::pow(k, 1.0 - sigma) / (1.0 - sigma);
}

double WealthUtility::deriv(double k) const {
  if (kind == Kind::log_form) return beta / k;
  return beta * std::pow(k, -sigma);
}

double WealthUtility::deriv_inverse(double target) const {
  if (!(target > 0.0))
    throw std::domain_error("WealthUtility: a' target must be > 0");
  if (kind == Kind::log_form) return beta / target;
  return std::pow(beta / target, 1.0 / sigma);
}

void WealthUtility::validate() const {
  if (!(beta > 0.0))
    throw std::domain_error("WealthUtility: beta must be > 0");
  if (kind == Kind::power_form && (!(sigma > 0.0) || sigma == 1.0))
    throw std::domain_error(
        "WealthUtility: power form needs sigma > 0 and sigma != 1");
}

double InnovationDisutility::value(double s) const {
  const double p = 1.0 + 1.0 / elasticity;
  return std::pow(s, p) / (scale * p);
}

double InnovationDisutility::deriv(double s) const {
  return std::pow(s, 1.0 / elasticity) / scale;
}

double InnovationDisutility::deriv_inverse(double m) const {
  if (m < 0.0)
    throw std::domain_error("InnovationDisutility: marginal must be >= 0");
  return std::pow(scale * m, elasticity);
}

void InnovationDisutility::validate() const {
  if (!(elasticity > 0.0))
    throw std::domain_error("InnovationDisutility: elasticity must be > 0");
  if (!(scale > 0.0))
    throw std::domain_error("InnovationDisutility: scale must be > 0");
}

void AgentProfile::validate() const {
  wealth_utility.validate();
  disutility.validate();
  if (!(r > 0.0)) throw std::domain_error("AgentProfile: r must be > 0");
  if (!(delta > r))
    throw std::domain_error(
        "AgentProfile: delta must exceed r for an interior wealth solution");
  if (k_init < 0.0)
    throw std::domain_error("AgentProfile: k_init must be >= 0");
  if (n < 0.0) throw std::domain_error("AgentProfile: n must be >= 0");
}

// ---------------------------------------------------------------------------
// Steady state
// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  double s;
  bool boundary;
};

// Candidate innovation choices: the zero corner, the interior of the
// floor (h2' = 1), the floor-to-formula kink, sign changes of
// h2' - P' over the formula segments, and the upper support edge when
// the marginal gain is still positive there.
std::vector<Candidate> innovation_candidates(
    const AgentProfile& agent, const IntegratedSchedule& schedule) {
  const double x0 = schedule.junction();
  const double upper = std::max(schedule.support_max(), x0);
  std::vector<Candidate> out;
  out.push_back({0.0, false});

  const double s_floor = agent.disutility.deriv_inverse(1.0);
  if (s_floor > 0.0 && s_floor < x0) out.push_back({s_floor, false});
  if (x0 > 0.0) {
    // When the schedule ends inside the floor, the kink is the upper edge;
    // flag it if marginal gains remain there.
    const bool exhausted =
        schedule.support_max() <= x0 && agent.disutility.deriv(x0) < 1.0;
    out.push_back({x0, exhausted});
  }

  const auto foc = [&](double s) {
    return agent.disutility.deriv(s) - schedule.marginal_at(s);
  };

  if (schedule.support_max() > x0) {
    // Probe each Hermite segment on a fixed subdivision; the marginal is
    // quadratic per segment, so endpoint sign checks alone could miss a
    // double crossing.
    std::vector<double> probes{x0};
    for (double g : schedule.grid()) {
      if (g > x0) probes.push_back(g);
    }
    constexpr int kSub = 8;
    double prev_x = probes.front();
    double prev_f = foc(prev_x);
    if (prev_f == 0.0) out.push_back({prev_x, false});
    for (std::size_t i = 1; i < probes.size(); ++i) {
      for (int j = 1; j <= kSub; ++j) {
        const double x = probes[i - 1] +
                         (probes[i] - probes[i - 1]) * j / double(kSub);
        const double f = foc(x);
        if (f == 0.0) {
          out.push_back({x, false});
        } else if ((f > 0.0) != (prev_f > 0.0)) {
          const auto root = find_root(foc, prev_x, x, 1e-10);
          out.push_back({root.x, false});
        }
        prev_x = x;
        prev_f = f;
      }
    }
    if (prev_f < 0.0) out.push_back({upper, true});
  }
  return out;
}

}  // namespace

SteadyState solve_steady_state(const AgentProfile& agent,
                               const IntegratedSchedule& schedule) {
  agent.validate();

  SteadyState ss;
  ss.wealth = agent.wealth_utility.deriv_inverse(agent.delta - agent.r);

  double best_gain = -HUGE_VAL;
  for (const Candidate& cand : innovation_candidates(agent, schedule)) {
    const double gain =
        schedule.total_at(cand.s) - agent.disutility.value(cand.s);
    if (gain > best_gain) {
      best_gain = gain;
      ss.innovation_flow = cand.s;
      ss.boundary = cand.boundary;
    }
  }

  ss.consumption = agent.n + agent.r * ss.wealth +
                   schedule.total_at(ss.innovation_flow);
  ss.flow_utility = ss.consumption + agent.wealth_utility.value(ss.wealth) -
                    agent.disutility.value(ss.innovation_flow);
  ss.pv_utility = present_value_utility(agent, ss);
  return ss;
}

double present_value_utility(const AgentProfile& agent, const SteadyState& ss) {
  return ss.flow_utility + agent.delta * (ss.wealth - agent.k_init);
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

GridBest brute_force_best_response(const AgentProfile& agent,
                                   const IntegratedSchedule& schedule,
                                   std::span<const double> s_grid,
                                   std::span<const double> k_grid) {
  agent.validate();
  if (s_grid.size() < 2 || k_grid.size() < 2)
    throw std::invalid_argument(
        "brute_force_best_response: grids need at least 2 points");
  for (std::size_t i = 0; i + 1 < s_grid.size(); ++i) {
    if (!(s_grid[i + 1] > s_grid[i]))
      throw std::invalid_argument(
          "brute_force_best_response: s grid must be strictly increasing");
  }
  for (std::size_t i = 0; i + 1 < k_grid.size(); ++i) {
    if (!(k_grid[i + 1] > k_grid[i]))
      throw std::invalid_argument(
          "brute_force_best_response: k grid must be strictly increasing");
  }
  if (s_grid.front() < 0.0 || !(k_grid.front() > 0.0))
    throw std::invalid_argument(
        "brute_force_best_response: need s >= 0 and k > 0");

  std::vector<double> prize(s_grid.size());
  for (std::size_t j = 0; j < s_grid.size(); ++j) {
    prize[j] = schedule.total_at(s_grid[j]);
  }

  const double e = agent.disutility.elasticity;
  const double h2_exp = 1.0 + 1.0 / e;
  const double h2_coeff = 1.0 / (agent.disutility.scale * h2_exp);
  const auto& ops = kernels::active();

  GridBest best;
  double best_u = -HUGE_VAL;
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    const double k = k_grid[i];
    // Steady-state value of holding k from endowment k_init: the flow
    // terms plus the one-time wealth jump priced at delta.
    const double base = agent.n + agent.r * k +
                        agent.wealth_utility.value(k) -
                        agent.delta * (k - agent.k_init);
    const kernels::RowBest row = ops.utility_row_max(
        s_grid.data(), prize.data(), s_grid.size(), base, h2_coeff, h2_exp);
    if (row.value > best_u) {
      best_u = row.value;
      best = {s_grid[row.index], k, 0.0, row.index, i};
    }
  }
  best.flow_utility = agent.n + agent.r * best.wealth +
                      agent.wealth_utility.value(best.wealth) +
                      prize[best.s_index] -
                      agent.disutility.value(best.innovation_flow);

  if (best.k_index == 0 || best.k_index + 1 == k_grid.size())
    throw std::runtime_error(
        "brute_force_best_response: wealth argmax on grid boundary; widen "
        "the k grid");
  if (best.s_index + 1 == s_grid.size())
    throw std::runtime_error(
        "brute_force_best_response: innovation argmax on upper grid "
        "boundary; widen the s grid");
  if (best.s_index == 0 && s_grid.front() != 0.0)
    throw std::runtime_error(
        "brute_force_best_response: innovation argmax on lower grid "
        "boundary; widen the s grid");
  return best;
}

}  // namespace assettax

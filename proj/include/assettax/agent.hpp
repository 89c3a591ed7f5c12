#pragma once

// Steady-state behavior of prize-earning agents: innovation supply from
// h2'(s) = P'(s), wealth from a'(k) = delta - r, consumption from the
// budget identity, and present-value utility. A full product-grid
// search over (s, k) serves as the independent oracle for the solver.
//
// Agents have exactly one earnings channel: a prize schedule. Wage
// earners are governed by the wage-tax schedule directly and are not
// simulated here.

#include <span>
#include <string>

#include "assettax/schedule.hpp"

namespace assettax {

// a(k) = beta * ln k, or beta * k^(1-sigma) / (1-sigma); increasing and
// strictly concave with closed-form derivative.
struct WealthUtility {
  enum class Kind { log_form, power_form };
  Kind kind = Kind::log_form;
  double beta = 1.0;   // > 0
  double sigma = 0.0;  // power form only: > 0 and != 1

  double value(double k) const;
  double deriv(double k) const;
  double deriv_inverse(double target) const;  // k with a'(k) == target
  void validate() const;

  bool operator==(const WealthUtility&) const = default;
};

// h2(s) = s^(1+1/e) / (psi * (1 + 1/e)); increasing, strictly convex,
// h2(0) = 0, with supply elasticity e and scale psi.
struct InnovationDisutility {
  double elasticity = 1.0;  // e > 0
  double scale = 1.0;       // psi > 0

  double value(double s) const;
  double deriv(double s) const;          // s^(1/e) / psi
  double deriv_inverse(double m) const;  // (psi * m)^e
  void validate() const;

  bool operator==(const InnovationDisutility&) const = default;
};

struct AgentProfile {
  std::string name;
  double delta = 0.06;  // utility discount rate per period
  double r = 0.04;      // return on capital; needs delta > r > 0
  double k_init = 0.0;  // initial wealth, >= 0
  double n = 0.0;       // after-tax privilege income per period, >= 0
  WealthUtility wealth_utility;
  InnovationDisutility disutility;

  void validate() const;

  bool operator==(const AgentProfile&) const = default;
};

struct SteadyState {
  double consumption = 0.0;
  double wealth = 0.0;
  double innovation_flow = 0.0;
  double flow_utility = 0.0;  // c + a(k) - h2(s)
  double pv_utility = 0.0;    // flow + delta * (k - k_init)
  bool boundary = false;      // s pinned to the schedule's upper edge
};

// Solves the steady-state first-order conditions against the schedule:
// a'(k) = delta - r (closed form), h2'(s) = P'(s) (bracketed root search
// over the schedule segments, kink- and floor-aware), c from the budget.
// The budget identity holds exactly at the returned solution.
SteadyState solve_steady_state(const AgentProfile& agent,
                               const IntegratedSchedule& schedule);

// Discounted lifetime utility of the constant steady-state path: flow
// utility plus the wealth adjustment delta * (k - k_init).
double present_value_utility(const AgentProfile& agent, const SteadyState& ss);

struct GridBest {
  double innovation_flow = 0.0;
  double wealth = 0.0;
  double flow_utility = 0.0;
  std::size_t s_index = 0;
  std::size_t k_index = 0;
};

// Grid oracle for the solver: maximizes, over the full product grid, the
// steady-state value of choosing (s, k) from endowment k_init,
//   n + r*k + P(s) + a(k) - h2(s) - delta*(k - k_init),
// whose last term prices the one-time wealth jump (without it the
// objective is monotone in k and the wealth condition a'(k) = delta - r
// could never emerge). Every cell is visited; per-column prize values
// are cached but the scan is not otherwise shortcut. flow_utility in the
// result is the budget-consistent c + a(k) - h2(s) at the argmax.
// Throws std::runtime_error asking for a wider grid when the argmax
// lands on the k edges or the upper s edge; the zero lower edge of s is
// a legitimate corner.
GridBest brute_force_best_response(const AgentProfile& agent,
                                   const IntegratedSchedule& schedule,
                                   std::span<const double> s_grid,
                                   std::span<const double> k_grid);

}  // namespace assettax

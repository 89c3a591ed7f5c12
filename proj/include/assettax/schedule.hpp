#pragma once

// The four marginal schedule formulas (optimal wage tax and the
// innovation / mineral-discovery / natural-monopoly prizes), their
// integration into total schedules, and the cost-reimbursement floor
// (total prize equals the created value up to floor_multiplier times
// the creation cost, the formula region beyond).
//
// Points where a formula leaves its economic regime (average upper
// weight above 1, or a nonpositive denominator) still return the
// formula value but carry an out_of_regime flag.

#include <memory>
#include <vector>

#include "assettax/distribution.hpp"
#include "assettax/weights.hpp"

namespace assettax {

enum class ScheduleKind {
  wage_tax,
  innovation_prize,
  mineral_prize,
  monopoly_prize,
};

enum class Regime { ok, out_of_regime };

struct Marginal {
  double value = 0.0;
  Regime regime = Regime::ok;
};

// Raw formula layer: marginals from precomputed inputs.
//   wage tax    T' = (1 - Gbar) / (1 - Gbar + alpha*e)
//   innovation  P' = alpha*e*G* / (1 - Gbar + alpha*e*G*)
//   mineral     P' = alpha*e / (1 - Gbar + alpha*e)
//   monopoly    same form as mineral with the R-subscripted inputs
// Degenerate 0/0 points (Gbar == 1 with vanishing alpha*e) resolve to the
// continuity limits: 0 for the wage tax, 1 for the prizes.
Marginal wage_tax_marginal(double gbar_above, double alpha, double elasticity);
Marginal innovation_prize_marginal(double gbar_above, double alpha,
                                   double elasticity, double gstar);
Marginal mineral_prize_marginal(double gbar_above, double alpha,
                                double elasticity);
Marginal monopoly_prize_marginal(double gbar_above, double alpha,
                                 double elasticity);

struct ScheduleParams {
  ScheduleKind kind = ScheduleKind::wage_tax;
  std::shared_ptr<const DistributionModel> distribution;
  WelfareWeightProfile weights = WelfareWeightProfile::constant();
  ElasticityProfile elasticity = ElasticityProfile::constant(0.0);
  double floor_multiplier = 3.0;  // prize kinds only
  double creation_cost = 0.0;     // prize kinds only
  // Segment integration refines until step halving changes the result by
  // less than this relative amount.
  double integration_rel_tol = 1e-7;

  void validate() const;
};

// Marginal at one point, composing Gbar, alpha and e from the params.
// Below the distribution's support floor the continuity limits apply
// (wage tax 0, prizes 1).
Marginal marginal_wage_tax(const ScheduleParams& params, double z);
Marginal marginal_innovation_prize(const ScheduleParams& params, double s);
Marginal marginal_mineral_prize(const ScheduleParams& params, double u);
Marginal marginal_monopoly_prize(const ScheduleParams& params, double v);
Marginal marginal(const ScheduleParams& params, double x);

// An integrated schedule on a grid. Prize kinds: total(x) = x up to the
// junction x0 = floor_multiplier * creation_cost, then
// x0 + integral of the marginal. Wage tax: total(x) = integral of the
// marginal from 0 (which vanishes below the support floor). Construction
// may insert the junction (or the support floor) as an extra node so the
// two regions never share a segment. Between nodes, evaluation uses the
// cubic Hermite interpolant of (totals, marginals), so marginal_at is
// exactly the derivative of total_at.
class IntegratedSchedule {
 public:
  ScheduleKind kind() const { return kind_; }
  double junction() const { return junction_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& totals() const { return totals_; }
  const std::vector<double>& marginals() const { return marginals_; }
  const std::vector<Regime>& regimes() const { return regimes_; }

  double support_min() const;  // lowest x where total_at is defined
  double support_max() const { return grid_.back(); }
  bool any_out_of_regime() const;

  double total_at(double x) const;
  double marginal_at(double x) const;

  // Constant-marginal schedule on [0, x_max] (junction 0); used as a
  // linear-prize baseline and by closed-form checks.
  static IntegratedSchedule linear(ScheduleKind kind, double marginal_value,
                                   double x_max);

 private:
  friend IntegratedSchedule integrate_schedule(const ScheduleParams&,
                                               const std::vector<double>&);
  IntegratedSchedule() = default;

  std::size_t segment_of(double x) const;

  ScheduleKind kind_ = ScheduleKind::wage_tax;
  double junction_ = 0.0;
  std::vector<double> grid_;
  std::vector<double> totals_;
  std::vector<double> marginals_;
  std::vector<Regime> regimes_;
};

// Integrates the marginal over the given strictly increasing grid, which
// must stay below the distribution's tail truncation point. Marginal
// evaluation failures are rethrown with the offending grid point named.
IntegratedSchedule integrate_schedule(const ScheduleParams& params,
                                      const std::vector<double>& grid);

// Single-point totals (no grid artifact); same semantics as the
// integrated schedule. The policy engine uses these with per-asset
// creation costs. Awards estimated period by period (a deposit worked
// over years, say) evaluate this same schedule on the per-period value
// flow; no separate dynamic schedule exists.
double prize_total(const ScheduleParams& params, double value,
                   double creation_cost);
double wage_tax_total(const ScheduleParams& params, double z);

}  // namespace assettax

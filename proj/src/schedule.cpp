#include "assettax/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "assettax/numerics.hpp"

namespace assettax {

namespace {

Regime regime_for(double gbar) {
  return gbar <= 1.0 ? Regime::ok : Regime::out_of_regime;
}

Marginal prize_form(double gbar, double num) {
  const double den = 1.0 - gbar + num;
  if (den > 0.0) return {num / den + 0.0, regime_for(gbar)};
  if (gbar == 1.0 && num == 0.0) return {1.0, Regime::ok};
  return {num / den + 0.0, Regime::out_of_regime};
}

}  // namespace

Marginal wage_tax_marginal(double gbar_above, double alpha,
                           double elasticity) {
  const double num = 1.0 - gbar_above;
  const double den = num + alpha * elasticity;
  if (den > 0.0) return {num / den + 0.0, regime_for(gbar_above)};
  if (num == 0.0 && den == 0.0) return {0.0, Regime::ok};
  return {num / den + 0.0, Regime::out_of_regime};
}

Marginal innovation_prize_marginal(double gbar_above, double alpha,
                                   double elasticity, double gstar) {
  return prize_form(gbar_above, alpha * elasticity * gstar);
}

Marginal mineral_prize_marginal(double gbar_above, double alpha,
                                double elasticity) {
  return prize_form(gbar_above, alpha * elasticity);
}

Marginal monopoly_prize_marginal(double gbar_above, double alpha,
                                 double elasticity) {
  return prize_form(gbar_above, alpha * elasticity);
}

void ScheduleParams::validate() const {
  if (!distribution)
    throw std::invalid_argument("ScheduleParams: distribution is required");
  elasticity.validate();
  if (floor_multiplier < 0.0)
    throw std::invalid_argument(
        "ScheduleParams: floor_multiplier must be >= 0");
  if (creation_cost < 0.0)
    throw std::invalid_argument("ScheduleParams: creation_cost must be >= 0");
  if (!(integration_rel_tol > 0.0))
    throw std::invalid_argument(
        "ScheduleParams: integration_rel_tol must be > 0");
}

namespace {

Marginal eval_marginal(const ScheduleParams& params, double x) {
  const DistributionModel& model = *params.distribution;
  if (x <= model.support_floor()) {
    // Continuity limits at and below the support floor (where Gbar is 1
    // by definition): no tax accrues, prizes reimburse in full.
    return params.kind == ScheduleKind::wage_tax ? Marginal{0.0, Regime::ok}
                                                 : Marginal{1.0, Regime::ok};
  }
  const double gbar = avg_weight_above(params.weights, model, x);
  const double alpha = model.local_pareto_parameter(x);
  const double e = params.elasticity.at(x);
  switch (params.kind) {
    case ScheduleKind::wage_tax:
      return wage_tax_marginal(gbar, alpha, e);
    case ScheduleKind::innovation_prize:
      return innovation_prize_marginal(gbar, alpha, e,
                                       params.weights.benefit_weight_gstar());
    case ScheduleKind::mineral_prize:
      return mineral_prize_marginal(gbar, alpha, e);
    case ScheduleKind::monopoly_prize:
      return monopoly_prize_marginal(gbar, alpha, e);
  }
  throw std::logic_error("eval_marginal: unknown schedule kind");
}

[[noreturn]] void rethrow_at(double x, const std::exception& e) {
  std::ostringstream os;
  os << "schedule evaluation failed at x = " << x << ": " << e.what();
  throw std::runtime_error(os.str());
}

double integrate_marginal(const ScheduleParams& params, double a, double b) {
  try {
    return trapezoid_refined(
        [&](double x) { return eval_marginal(params, x).value; }, a, b,
        params.integration_rel_tol);
  } catch (const tail_truncation_error& e) {
    rethrow_at(b, e);
  }
}

}  // namespace

Marginal marginal_wage_tax(const ScheduleParams& params, double z) {
  ScheduleParams p = params;
  p.kind = ScheduleKind::wage_tax;
  return eval_marginal(p, z);
}

Marginal marginal_innovation_prize(const ScheduleParams& params, double s) {
  ScheduleParams p = params;
  p.kind = ScheduleKind::innovation_prize;
  return eval_marginal(p, s);
}

Marginal marginal_mineral_prize(const ScheduleParams& params, double u) {
  ScheduleParams p = params;
  p.kind = ScheduleKind::mineral_prize;
  return eval_marginal(p, u);
}

Marginal marginal_monopoly_prize(const ScheduleParams& params, double v) {
  ScheduleParams p = params;
  p.kind = ScheduleKind::monopoly_prize;
  return eval_marginal(p, v);
}

Marginal marginal(const ScheduleParams& params, double x) {
  return eval_marginal(params, x);
}

// ---------------------------------------------------------------------------
// IntegratedSchedule
// ---------------------------------------------------------------------------

double IntegratedSchedule::support_min() const {
  // The floor region (prizes) and the below-floor zero region (wage tax)
  // make evaluation total on [0, grid back].
  return 0.0;
}

bool IntegratedSchedule::any_out_of_regime() const {
  return std::any_of(regimes_.begin(), regimes_.end(),
                     [](Regime r) { return r == Regime::out_of_regime; });
}

std::size_t IntegratedSchedule::segment_of(double x) const {
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  if (i == 0) return 0;
  if (i >= grid_.size()) return grid_.size() - 2;
  return i - 1;
}

double IntegratedSchedule::total_at(double x) const {
  if (kind_ != ScheduleKind::wage_tax && x <= junction_) {
    return x;  // full reimbursement within the floor
  }
  if (kind_ == ScheduleKind::wage_tax && x <= grid_.front()) {
    return x < 0.0 ? 0.0 : totals_.front();
  }
  if (x < grid_.front() || x > grid_.back()) {
    throw std::out_of_range("IntegratedSchedule::total_at: x outside grid");
  }
  const std::size_t i = segment_of(x);
  const double h = grid_[i + 1] - grid_[i];
  const double t = (x - grid_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
  const double h10 = t3 - 2.0 * t2 + t;
  const double h01 = -2.0 * t3 + 3.0 * t2;
  const double h11 = t3 - t2;
  return h00 * totals_[i] + h10 * h * marginals_[i] + h01 * totals_[i + 1] +
         h11 * h * marginals_[i + 1];
}

double IntegratedSchedule::marginal_at(double x) const {
  if (kind_ != ScheduleKind::wage_tax && x < junction_) return 1.0;
  if (kind_ == ScheduleKind::wage_tax && x <= grid_.front()) {
    return marginals_.front();
  }
  if (x < grid_.front() || x > grid_.back()) {
    throw std::out_of_range("IntegratedSchedule::marginal_at: x outside grid");
  }
  const std::size_t i = segment_of(x);
  const double h = grid_[i + 1] - grid_[i];
  const double t = (x - grid_[i]) / h;
  const double t2 = t * t;
  const double d00 = (6.0 * t2 - 6.0 * t) / h;
  const double d10 = 3.0 * t2 - 4.0 * t + 1.0;
  const double d01 = (-6.0 * t2 + 6.0 * t) / h;
  const double d11 = 3.0 * t2 - 2.0 * t;
  return d00 * totals_[i] + d10 * marginals_[i] + d01 * totals_[i + 1] +
         d11 * marginals_[i + 1];
}

IntegratedSchedule IntegratedSchedule::linear(ScheduleKind kind,
                                              double marginal_value,
                                              double x_max) {
  if (!(x_max > 0.0))
    throw std::invalid_argument("IntegratedSchedule::linear: x_max must be > 0");
  IntegratedSchedule s;
  s.kind_ = kind;
  s.junction_ = 0.0;
  s.grid_ = {0.0, x_max};
  s.totals_ = {0.0, marginal_value * x_max};
  s.marginals_ = {marginal_value, marginal_value};
  s.regimes_ = {Regime::ok, Regime::ok};
  return s;
}

IntegratedSchedule integrate_schedule(const ScheduleParams& params,
                                      const std::vector<double>& grid) {
  params.validate();
  if (grid.size() < 2)
    throw std::invalid_argument("integrate_schedule: need at least 2 points");
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i + 1] > grid[i]))
      throw std::invalid_argument(
          "integrate_schedule: grid must be strictly increasing");
  }
  if (grid.front() < 0.0)
    throw std::invalid_argument("integrate_schedule: grid must be >= 0");
  const DistributionModel& model = *params.distribution;
  if (grid.back() > model.truncation_point()) {
    std::ostringstream os;
    os << "integrate_schedule: grid point " << grid.back()
       << " lies beyond the tail truncation point "
       << model.truncation_point();
    throw std::invalid_argument(os.str());
  }

  const bool is_prize = params.kind != ScheduleKind::wage_tax;
  const double junction =
      is_prize ? params.floor_multiplier * params.creation_cost : 0.0;

  std::vector<double> nodes = grid;
  if (is_prize && junction < grid.back() &&
      std::find(nodes.begin(), nodes.end(), junction) == nodes.end()) {
    nodes.push_back(junction);
  }
  if (!is_prize && model.support_floor() < grid.front() &&
      model.support_floor() >= 0.0) {
    nodes.push_back(model.support_floor());
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  IntegratedSchedule out;
  out.kind_ = params.kind;
  out.junction_ = junction;
  out.grid_ = nodes;
  out.totals_.resize(nodes.size());
  out.marginals_.resize(nodes.size());
  out.regimes_.resize(nodes.size());

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    if (is_prize && x < junction) {
      out.marginals_[i] = 1.0;
      out.regimes_[i] = Regime::ok;
      continue;
    }
    Marginal m;
    try {
      m = eval_marginal(params, x);
    } catch (const std::exception& e) {
      rethrow_at(x, e);
    }
    out.marginals_[i] = m.value;
    out.regimes_[i] = m.regime;
  }

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double x = nodes[i];
    if (is_prize) {
      if (x <= junction) {
        out.totals_[i] = x;
      } else if (i > 0 && nodes[i - 1] >= junction) {
        out.totals_[i] =
            out.totals_[i - 1] + integrate_marginal(params, nodes[i - 1], x);
      } else {
        out.totals_[i] = junction + integrate_marginal(params, junction, x);
      }
    } else {
      if (i == 0) {
        const double floor = model.support_floor();
        out.totals_[0] =
            x > floor ? integrate_marginal(params, floor, x) : 0.0;
      } else {
        out.totals_[i] =
            out.totals_[i - 1] + integrate_marginal(params, nodes[i - 1], x);
      }
    }
  }
  return out;
}

double prize_total(const ScheduleParams& params, double value,
                   double creation_cost) {
  params.validate();
  if (params.kind == ScheduleKind::wage_tax)
    throw std::invalid_argument("prize_total: not a prize schedule");
  if (value < 0.0)
    throw std::invalid_argument("prize_total: value must be >= 0");
  if (creation_cost < 0.0)
    throw std::invalid_argument("prize_total: creation cost must be >= 0");
  const double junction = params.floor_multiplier * creation_cost;
  if (value <= junction) return value;
  return junction + integrate_marginal(params, junction, value);
}

double wage_tax_total(const ScheduleParams& params, double z) {
  params.validate();
  if (params.kind != ScheduleKind::wage_tax)
    throw std::invalid_argument("wage_tax_total: not a wage tax schedule");
  if (z < 0.0) throw std::invalid_argument("wage_tax_total: z must be >= 0");
  const double floor = params.distribution->support_floor();
  if (z <= floor) return 0.0;
  return integrate_marginal(params, floor, z);
}

}  // namespace assettax

#pragma once

// Relative welfare-weight profiles g(x), normalized so the population
// mean weight is 1 under a reference distribution, plus the averaged
// upper weight Gbar(x) = E[g(X) | X > x] and elasticity profiles e(x).
//
// Built-in weight families: constant (g == 1), power (g proportional to
// x^-nu), and a two-level step. G*, the weight of the recipient of the
// average dollar of benefits, rides along as a scalar.

#include <vector>

#include "assettax/distribution.hpp"

namespace assettax {

enum class WeightKind { constant, power, step };

class WelfareWeightProfile {
 public:
  // g == 1 everywhere; already normalized under any model.
  static WelfareWeightProfile constant(double gstar = 1.0);
  // g(x) = c * x^-nu, c chosen so E[g] = 1 under model. nu >= 0.
  static WelfareWeightProfile power(double nu, const DistributionModel& model,
                                    double gstar = 1.0);
  // g(x) = c*low below threshold, c*high at or above it; c normalizes.
  static WelfareWeightProfile step(double threshold, double low, double high,
                                   const DistributionModel& model,
                                   double gstar = 1.0);

  double weight(double x) const;
  double benefit_weight_gstar() const { return gstar_; }
  WeightKind kind() const { return kind_; }

  // Integral of weight(x) * density(x) over [lo, hi]. Splits at histogram
  // edges and the step threshold; power weights over histogram bins use
  // the closed-form antiderivative (the integrand is endpoint-singular
  // when the support touches zero).
  double weighted_mass(const DistributionModel& model, double lo, double hi,
                       double abs_tol = 1e-8) const;

  bool operator==(const WelfareWeightProfile&) const = default;

 private:
  WeightKind kind_ = WeightKind::constant;
  double nu_ = 0.0;
  double threshold_ = 0.0;
  double low_ = 1.0;
  double high_ = 1.0;
  double norm_ = 1.0;  // multiplicative normalization constant
  double gstar_ = 1.0;

  double raw_weight(double x) const;
  void normalize(const DistributionModel& model);
};

// Gbar(x) = E[g(X) | X > x] under the model, by adaptive quadrature on
// [max(x, floor), truncation point]. Throws tail_truncation_error when
// 1 - cdf(x) < kTailCutoff.
double avg_weight_above(const WelfareWeightProfile& profile,
                        const DistributionModel& model, double x);

// Piecewise-constant elasticity of supply: values has one more entry
// than thresholds; values[i] applies below thresholds[i].
struct ElasticityProfile {
  std::vector<double> thresholds;
  std::vector<double> values;

  static ElasticityProfile constant(double e) { return {{}, {e}}; }

  double at(double x) const;
  void validate() const;

  bool operator==(const ElasticityProfile&) const = default;
};

}  // namespace assettax

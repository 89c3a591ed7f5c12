#include "assettax/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "assettax/numerics.hpp"

namespace assettax {

WelfareWeightProfile WelfareWeightProfile::constant(double gstar) {
  if (gstar < 0.0)
    throw std::invalid_argument("WelfareWeightProfile: G* must be >= 0");
  WelfareWeightProfile p;
  p.kind_ = WeightKind::constant;
  p.gstar_ = gstar;
  return p;
}

WelfareWeightProfile WelfareWeightProfile::power(
    double nu, const DistributionModel& model, double gstar) {
  if (nu < 0.0)
    throw std::invalid_argument("WelfareWeightProfile: nu must be >= 0");
  if (gstar < 0.0)
    throw std::invalid_argument("WelfareWeightProfile: G* must be >= 0");
  if (nu >= 1.0 && model.support_floor() == 0.0 &&
      std::holds_alternative<PiecewiseEmpirical>(model.spec())) {
    // x^-nu against a density bounded away from zero near the origin
    // has a divergent mean; nothing to normalize.
    throw std::invalid_argument(
        "WelfareWeightProfile: power weight with nu >= 1 diverges on a "
        "histogram support touching zero");
  }
  WelfareWeightProfile p;
  p.kind_ = WeightKind::power;
  p.nu_ = nu;
  p.gstar_ = gstar;
  p.normalize(model);
  return p;
}

WelfareWeightProfile WelfareWeightProfile::step(double threshold, double low,
                                                double high,
                                                const DistributionModel& model,
                                                double gstar) {
  if (low < 0.0 || high < 0.0)
    throw std::invalid_argument("WelfareWeightProfile: levels must be >= 0");
  if (!(low > 0.0) && !(high > 0.0))
    throw std::invalid_argument("WelfareWeightProfile: weight cannot vanish");
  if (gstar < 0.0)
    throw std::invalid_argument("WelfareWeightProfile: G* must be >= 0");
  WelfareWeightProfile p;
  p.kind_ = WeightKind::step;
  p.threshold_ = threshold;
  p.low_ = low;
  p.high_ = high;
  p.gstar_ = gstar;
  p.normalize(model);
  return p;
}

double WelfareWeightProfile::raw_weight(double x) const {
  switch (kind_) {
    case WeightKind::constant:
      return 1.0;
    case WeightKind::power:
      return std::pow(x, -nu_);
    case WeightKind::step:
      return x < threshold_ ? low_ : high_;
  }
  return 1.0;
}

double WelfareWeightProfile::weight(double x) const {
  if (kind_ == WeightKind::constant) return 1.0;
  return norm_ * raw_weight(x);
}

double WelfareWeightProfile::weighted_mass(const DistributionModel& model,
                                           double lo, double hi,
                                           double abs_tol) const {
  if (!(hi > lo)) return 0.0;
  if (kind_ == WeightKind::constant) {
    // Tail differences stay accurate where cdf values crowd against 1.
    return model.tail(lo) - model.tail(hi);
  }

  std::vector<double> pts{lo, hi};
  if (kind_ == WeightKind::step && threshold_ > lo && threshold_ < hi) {
    pts.push_back(threshold_);
  }
  const auto* hist = std::get_if<PiecewiseEmpirical>(&model.spec());
  for (double b : model.quadrature_breakpoints(lo, hi)) {
    pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const double seg_tol = abs_tol / static_cast<double>(pts.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    const double mid = 0.5 * (a + b);
    if (kind_ == WeightKind::step) {
      // The weight is constant on the segment (splits at the threshold),
      // so the segment mass is exact.
      total += weight(mid) * (model.tail(a) - model.tail(b));
    } else if (hist != nullptr) {
      // Power weight against a constant density: closed-form primitive
      // (the integrand is endpoint-singular when the support reaches 0).
      const double d = model.density(mid);
      if (d <= 0.0) continue;
      double primitive;
      if (nu_ == 1.0) {
        primitive = std::log(b / a);
      } else {
        primitive =
            (std::pow(b, 1.0 - nu_) - std::pow(a, 1.0 - nu_)) / (1.0 - nu_);
      }
      total += norm_ * d * primitive;
    } else {
      total += integrate(
          [&](double v) {
            const double d = model.density(v);
            return d > 0.0 ? weight(v) * d : 0.0;
          },
          a, b, seg_tol);
    }
  }
  return total;
}

void WelfareWeightProfile::normalize(const DistributionModel& model) {
  norm_ = 1.0;
  const double mean = weighted_mass(model, model.support_floor(),
                                    model.truncation_point(), 1e-10);
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw std::invalid_argument(
        "WelfareWeightProfile: weight is not normalizable under this model");
  }
  norm_ = 1.0 / mean;
}

double avg_weight_above(const WelfareWeightProfile& profile,
                        const DistributionModel& model, double x) {
  const double t = model.tail(x);
  if (t < DistributionModel::kTailCutoff) {
    throw tail_truncation_error(
        "avg_weight_above: x beyond the tail truncation point");
  }
  if (profile.kind() == WeightKind::constant) return 1.0;
  const double lo = std::max(x, model.support_floor());
  const double hi = model.truncation_point();
  if (lo >= hi) return profile.weight(hi);
  // Absolute tolerance 1e-8 on the tail integral; the conditional mean
  // loses accuracy as the conditioning mass shrinks, which the 1e-12
  // truncation guard bounds.
  const double num = profile.weighted_mass(model, lo, hi, 1e-8);
  return num / t;
}

double ElasticityProfile::at(double x) const {
  std::size_t i = 0;
  while (i < thresholds.size() && x >= thresholds[i]) ++i;
  return values[i];
}

void ElasticityProfile::validate() const {
  if (values.size() != thresholds.size() + 1)
    throw std::invalid_argument(
        "ElasticityProfile: need one more value than thresholds");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1]))
      throw std::invalid_argument(
          "ElasticityProfile: thresholds must be strictly increasing");
  }
  for (double v : values) {
    if (v < 0.0)
      throw std::invalid_argument(
          "ElasticityProfile: elasticity must be >= 0");
  }
}

}  // namespace assettax

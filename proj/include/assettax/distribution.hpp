#pragma once

// Parametric distributions of incomes and created-asset values. Each
// model exposes cdf, density, the upper-tail complement, and the local
// Pareto parameter alpha(x) = x * density(x) / (1 - cdf(x)).
//
// Evaluations are truncated in the upper tail: beyond the point where
// 1 - cdf < kTailCutoff, tail-sensitive operations raise
// tail_truncation_error instead of returning noise.

#include <stdexcept>
#include <variant>
#include <vector>

namespace assettax {

class tail_truncation_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Pareto with scale x_m > 0 and shape a > 0: cdf 1 - (x_m/x)^a above x_m.
struct Pareto {
  double scale = 1.0;
  double shape = 1.0;
  bool operator==(const Pareto&) const = default;
};

// LogNormal(mu, sigma) on (0, inf), sigma > 0.
struct LogNormal {
  double mu = 0.0;
  double sigma = 1.0;
  bool operator==(const LogNormal&) const = default;
};

// Histogram density: edges are strictly increasing bin boundaries
// (size n+1), masses the probability in each bin (size n), spread
// uniformly within the bin. The cdf is continuous and piecewise linear.
// Masses are normalized to sum to 1 on construction.
struct PiecewiseEmpirical {
  std::vector<double> edges;
  std::vector<double> masses;
  bool operator==(const PiecewiseEmpirical&) const = default;
};

class DistributionModel {
 public:
  static constexpr double kTailCutoff = 1e-12;

  explicit DistributionModel(Pareto p);
  explicit DistributionModel(LogNormal l);
  explicit DistributionModel(PiecewiseEmpirical e);

  double cdf(double x) const;
  // Upper-tail complement 1 - cdf(x), computed directly for accuracy.
  double tail(double x) const;
  double density(double x) const;

  // Lower end of the support (x_m, 0, or the first edge).
  double support_floor() const;
  // Point T with tail(T) == kTailCutoff; evaluations beyond T are refused.
  double truncation_point() const;

  // alpha(x) = x * density(x) / tail(x). Throws tail_truncation_error
  // when tail(x) < kTailCutoff.
  double local_pareto_parameter(double x) const;

  // Interior split points for quadrature over (lo, hi): scale markers
  // where the density carries mass (doubling ladder above a Pareto
  // scale, sigma steps for a lognormal, histogram edges). Seeding an
  // adaptive integrator with these prevents it from probing only
  // near-zero tails of a wide interval and accepting a spurious zero.
  std::vector<double> quadrature_breakpoints(double lo, double hi) const;

  const std::variant<Pareto, LogNormal, PiecewiseEmpirical>& spec() const {
    return spec_;
  }
  bool operator==(const DistributionModel& other) const {
    return spec_ == other.spec_;
  }

 private:
  std::variant<Pareto, LogNormal, PiecewiseEmpirical> spec_;
  double truncation_ = 0.0;
};

}  // namespace assettax

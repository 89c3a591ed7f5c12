#include "assettax/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "assettax/numerics.hpp"

namespace assettax {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

void check_pareto(const Pareto& p) {
  if (!(p.scale > 0.0) || !(p.shape > 0.0))
    throw std::invalid_argument("Pareto: scale and shape must be > 0");
}

void check_lognormal(const LogNormal& l) {
  if (!(l.sigma > 0.0))
    throw std::invalid_argument("LogNormal: sigma must be > 0");
}

void check_empirical(PiecewiseEmpirical& e) {
  if (e.edges.size() < 2 || e.masses.size() + 1 != e.edges.size())
    throw std::invalid_argument(
        "PiecewiseEmpirical: need n+1 edges for n bin masses");
  if (e.edges.front() < 0.0)
    throw std::invalid_argument("PiecewiseEmpirical: support must be >= 0");
  for (std::size_t i = 1; i < e.edges.size(); ++i) {
    if (!(e.edges[i] > e.edges[i - 1]))
      throw std::invalid_argument(
          "PiecewiseEmpirical: edges must be strictly increasing");
  }
  double total = 0.0;
  for (double m : e.masses) {
    if (m < 0.0)
      throw std::invalid_argument("PiecewiseEmpirical: masses must be >= 0");
    total += m;
  }
  if (!(total > 0.0))
    throw std::invalid_argument("PiecewiseEmpirical: total mass must be > 0");
  for (double& m : e.masses) m /= total;
}

}  // namespace

DistributionModel::DistributionModel(Pareto p) : spec_(p) {
  check_pareto(p);
  // tail = (x_m/x)^a == cutoff  =>  x = x_m * cutoff^(-1/a)
  truncation_ = p.scale * std::pow(kTailCutoff, -1.0 / p.shape);
}

DistributionModel::DistributionModel(LogNormal l) : spec_(l) {
  check_lognormal(l);
  truncation_ = std::exp(l.mu + l.sigma * normal_tail_quantile(kTailCutoff));
}

DistributionModel::DistributionModel(PiecewiseEmpirical e)
    : spec_(std::move(e)) {
  auto& spec = std::get<PiecewiseEmpirical>(spec_);
  check_empirical(spec);
  // Invert the piecewise-linear cdf at 1 - cutoff.
  double acc = 0.0;
  truncation_ = spec.edges.back();
  for (std::size_t i = 0; i < spec.masses.size(); ++i) {
    if (acc + spec.masses[i] >= 1.0 - kTailCutoff) {
      const double need = (1.0 - kTailCutoff) - acc;
      const double w = spec.edges[i + 1] - spec.edges[i];
      truncation_ =
          spec.edges[i] + (spec.masses[i] > 0.0 ? need / spec.masses[i] * w : 0.0);
      break;
    }
    acc += spec.masses[i];
  }
}

double DistributionModel::cdf(double x) const {
  return std::visit(
      [x](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Pareto>) {
          if (x <= s.scale) return 0.0;
          return 1.0 - std::pow(s.scale / x, s.shape);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          if (x <= 0.0) return 0.0;
          return normal_cdf((std::log(x) - s.mu) / s.sigma);
        } else {
          if (x <= s.edges.front()) return 0.0;
          if (x >= s.edges.back()) return 1.0;
          double acc = 0.0;
          for (std::size_t i = 0; i < s.masses.size(); ++i) {
            if (x < s.edges[i + 1]) {
              const double w = s.edges[i + 1] - s.edges[i];
              return acc + s.masses[i] * (x - s.edges[i]) / w;
            }
            acc += s.masses[i];
          }
          return 1.0;
        }
      },
      spec_);
}

double DistributionModel::tail(double x) const {
  return std::visit(
      [x](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Pareto>) {
          if (x <= s.scale) return 1.0;
          return std::pow(s.scale / x, s.shape);
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          if (x <= 0.0) return 1.0;
          return normal_tail((std::log(x) - s.mu) / s.sigma);
        } else {
          if (x <= s.edges.front()) return 1.0;
          if (x >= s.edges.back()) return 0.0;
          double acc = 0.0;  // mass strictly above x, summed right to left
          for (std::size_t i = s.masses.size(); i-- > 0;) {
            if (x > s.edges[i]) {
              const double w = s.edges[i + 1] - s.edges[i];
              return acc + s.masses[i] * (s.edges[i + 1] - x) / w;
            }
            acc += s.masses[i];
          }
          return acc;
        }
      },
      spec_);
}

double DistributionModel::density(double x) const {
  return std::visit(
      [x](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Pareto>) {
          if (x < s.scale) return 0.0;
          return s.shape * std::pow(s.scale / x, s.shape) / x;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          if (x <= 0.0) return 0.0;
          const double z = (std::log(x) - s.mu) / s.sigma;
          return std::exp(-0.5 * z * z) / (x * s.sigma * kSqrt2Pi);
        } else {
          if (x < s.edges.front() || x >= s.edges.back()) return 0.0;
          for (std::size_t i = 0; i < s.masses.size(); ++i) {
            if (x < s.edges[i + 1]) {
              return s.masses[i] / (s.edges[i + 1] - s.edges[i]);
            }
          }
          return 0.0;
        }
      },
      spec_);
}

double DistributionModel::support_floor() const {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Pareto>) {
          return s.scale;
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          return 0.0;
        } else {
          return s.edges.front();
        }
      },
      spec_);
}

double DistributionModel::truncation_point() const { return truncation_; }

double DistributionModel::local_pareto_parameter(double x) const {
  const double t = tail(x);
  if (t < kTailCutoff) {
    throw tail_truncation_error(
        "local_pareto_parameter: x beyond the tail truncation point");
  }
  return x * density(x) / t;
}

std::vector<double> DistributionModel::quadrature_breakpoints(
    double lo, double hi) const {
  std::vector<double> pts;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Pareto>) {
          for (double x = s.scale; x < hi && pts.size() < 80; x *= 2.0) {
            if (x > lo) pts.push_back(x);
          }
        } else if constexpr (std::is_same_v<T, LogNormal>) {
          for (double z = -8.0; z <= 7.5; z += 0.5) {
            const double x = std::exp(s.mu + s.sigma * z);
            if (x > lo && x < hi) pts.push_back(x);
          }
        } else {
          for (double e : s.edges) {
            if (e > lo && e < hi) pts.push_back(e);
          }
        }
      },
      spec_);
  return pts;
}

}  // namespace assettax

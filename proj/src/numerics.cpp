#include "assettax/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace assettax {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_tail(double z) { return 0.5 * std::erfc(z / kSqrt2); }

double normal_tail_quantile(double p) {
  if (!(p > 0.0) || p > 0.5) {
    throw std::domain_error("normal_tail_quantile: p must be in (0, 0.5]");
  }
  // Crude bracket-free start, then Newton with the exact density.
  double z = std::sqrt(std::max(0.0, -2.0 * std::log(p)));
  for (int it = 0; it < 60; ++it) {
    const double err = normal_tail(z) - p;
    const double pdf = kInvSqrt2Pi * std::exp(-0.5 * z * z);
    if (pdf <= 0.0) break;
    const double step = err / pdf;
    z += step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) break;
  }
  return z;
}

}  // namespace assettax

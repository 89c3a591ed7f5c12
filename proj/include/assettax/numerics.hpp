#pragma once

// Small deterministic numerical toolbox shared by the library: adaptive
// Simpson quadrature, a bracketed bisection/secant root finder, composite
// trapezoid integration with step-halving, and normal-distribution helpers.

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace assettax {

namespace detail {

template <class F>
double adaptive_simpson_rec(F& f, double a, double m, double b, double fa,
                            double fm, double fb, double whole, double tol,
                            int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  // Standard Richardson acceptance: Simpson halving gains a factor 16,
  // so delta/15 estimates the error of (left + right).
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

}  // namespace detail

// Adaptive Simpson integration of f over [a, b] to the given absolute
// tolerance. Depth-limited; once the limit is reached the current
// Richardson-corrected estimate is accepted.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol = 1e-8,
                 int max_depth = 48) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(std::forward<F>(f), b, a, abs_tol, max_depth);
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol,
                                      max_depth);
}

// Composite trapezoid over [a, b], doubling the panel count until two
// successive estimates agree to rel_tol (Richardson-style step-halving
// check). Returns the finer estimate.
template <class F>
double trapezoid_refined(F&& f, double a, double b, double rel_tol = 1e-9,
                         int max_doublings = 22) {
  if (a == b) return 0.0;
  if (b < a)
    return -trapezoid_refined(std::forward<F>(f), b, a, rel_tol, max_doublings);
  double h = b - a;
  double prev = 0.5 * h * (f(a) + f(b));
  long n = 1;
  for (int pass = 0; pass < max_doublings; ++pass) {
    double mid_sum = 0.0;
    const double step = h / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
      mid_sum += f(a + (static_cast<double>(i) + 0.5) * step);
    }
    const double cur = 0.5 * (prev + step * mid_sum);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    if (std::abs(cur - prev) <= rel_tol * scale && pass > 0) return cur;
    prev = cur;
    n *= 2;
  }
  return prev;
}

struct RootResult {
  double x = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

// Bracketed bisection/secant hybrid (Illinois variant of regula falsi).
// f(lo) and f(hi) must differ in sign (either may be exactly zero).
// Stops when |f(x)| <= f_tol or the bracket collapses below x_tol; the
// bracket-collapse exit covers roots at kinks where the residual never
// becomes small.
template <class F>
RootResult find_root(F&& f, double lo, double hi, double f_tol = 1e-10,
                     double x_tol = 1e-13) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("find_root: endpoints do not bracket a root");
  }
  int side = 0;
  double x = lo;
  double fx = flo;
  for (int it = 1; it <= 256; ++it) {
    x = (flo * hi - fhi * lo) / (flo - fhi);
    if (!(x > lo) || !(x < hi)) x = 0.5 * (lo + hi);
    fx = f(x);
    if (std::abs(fx) <= f_tol) return {x, fx, it};
    if ((fx > 0.0) == (flo > 0.0)) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == +1) flo *= 0.5;
      side = +1;
    }
    if (hi - lo <= x_tol * (1.0 + std::abs(lo) + std::abs(hi))) {
      return {0.5 * (lo + hi), fx, it};
    }
  }
  return {x, fx, 256};
}

// Standard normal CDF / upper tail, accurate in both tails (erfc-based).
double normal_cdf(double z);
double normal_tail(double z);

// z with normal_tail(z) == p for p in (0, 0.5]. Newton iteration on the
// erfc form; used for distribution tail-truncation points.
double normal_tail_quantile(double p);

}  // namespace assettax

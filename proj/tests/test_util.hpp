#pragma once

// Test-side helpers, kept independent of the library's numerics so they
// can serve as oracles: a deterministic RNG and a fixed-panel Simpson
// rule.

#include <cmath>
#include <cstdint>
#include <random>

namespace testutil {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform() { return double(eng() >> 11) * 0x1p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return int(eng() % std::uint64_t(n)); }
};

template <class F>
double simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <=
         tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace testutil

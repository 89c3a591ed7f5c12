#include "assettax/distribution.hpp"

#include <doctest.h>

#include <cmath>

#include "test_util.hpp"

using namespace assettax;

TEST_CASE("pareto cdf") {
  const DistributionModel m{Pareto{1.0, 2.0}};
  CHECK(m.cdf(1.0) == 0.0);
  CHECK(m.cdf(0.5) == 0.0);
  CHECK(m.cdf(2.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.cdf(1e9) == doctest::Approx(1.0));
  CHECK(m.support_floor() == 1.0);

  // Cross-check against the numeric integral of the density.
  const double mass =
      testutil::simpson([&](double x) { return m.density(x); }, 1.0, 2.0,
                        2000);
  CHECK(testutil::close_rel(mass, m.cdf(2.0), 1e-9));
}

TEST_CASE("pareto local parameter equals the shape everywhere") {
  for (const double a : {1.1, 1.5, 2.0, 3.0}) {
    const DistributionModel m{Pareto{1.0, a}};
    for (int i = 0; i < 100; ++i) {
      const double x = 1.0 + i * 0.37 + 0.01;
      CHECK(std::abs(m.local_pareto_parameter(x) - a) <= 1e-9);
    }
  }
}

TEST_CASE("pareto local parameter matches a finite-difference oracle") {
  const DistributionModel m{Pareto{1.0, 2.0}};
  const double x = 5.0;
  const double h = 1e-6;
  const double dens = (m.cdf(x + h) - m.cdf(x - h)) / (2.0 * h);
  const double oracle = x * dens / (1.0 - m.cdf(x));
  CHECK(testutil::close_rel(m.local_pareto_parameter(x), oracle, 1e-7));
  CHECK(m.local_pareto_parameter(x) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("density matches the numerical derivative of the cdf") {
  const DistributionModel models[] = {
      DistributionModel{LogNormal{0.0, 1.0}},
      DistributionModel{Pareto{1.0, 2.0}},
      DistributionModel{PiecewiseEmpirical{{0.5, 1.5, 3.0}, {0.4, 0.6}}},
  };
  for (const auto& m : models) {
    for (double x = 1.1; x < 2.9; x += 0.2) {  // interior, off bin edges
      const double h = 1e-5 * x;
      const double numeric = (m.cdf(x + h) - m.cdf(x - h)) / (2.0 * h);
      CHECK(testutil::close_rel(m.density(x), numeric, 1e-4));
    }
  }
  const DistributionModel ln{LogNormal{0.0, 1.0}};
  for (double x = 0.25; x < 8.0; x += 0.25) {
    const double h = 1e-5 * x;
    const double numeric = (ln.cdf(x + h) - ln.cdf(x - h)) / (2.0 * h);
    CHECK(testutil::close_rel(ln.density(x), numeric, 1e-4));
  }
}

TEST_CASE("lognormal local parameter increases in x") {
  const DistributionModel m{LogNormal{0.0, 1.0}};
  double prev = -1.0;
  for (double x = 0.5; x < 30.0; x *= 1.3) {
    // Oracle route: finite-difference density over the exact tail.
    const double h = 1e-6 * x;
    const double fd_dens = (m.cdf(x + h) - m.cdf(x - h)) / (2.0 * h);
    const double oracle = x * fd_dens / m.tail(x);
    const double alpha = m.local_pareto_parameter(x);
    CHECK(testutil::close_rel(alpha, oracle, 1e-5));
    CHECK(alpha > prev);
    prev = alpha;
  }
}

TEST_CASE("histogram model") {
  const DistributionModel m{
      PiecewiseEmpirical{{0.0, 1.0, 3.0}, {0.25, 0.75}}};
  CHECK(m.support_floor() == 0.0);
  CHECK(m.cdf(0.0) == 0.0);
  CHECK(m.cdf(0.5) == doctest::Approx(0.125));
  CHECK(m.cdf(1.0) == doctest::Approx(0.25));
  CHECK(m.cdf(2.0) == doctest::Approx(0.625));
  CHECK(m.cdf(3.0) == 1.0);
  CHECK(m.density(0.5) == doctest::Approx(0.25));
  CHECK(m.density(2.0) == doctest::Approx(0.375));
  CHECK(m.tail(2.0) == doctest::Approx(0.375));

  // Unnormalized masses are normalized on construction.
  const DistributionModel m2{PiecewiseEmpirical{{0.0, 1.0, 3.0}, {1.0, 3.0}}};
  CHECK(m2.cdf(1.0) == doctest::Approx(0.25));
}

TEST_CASE("density integrates to one on the truncated support") {
  const DistributionModel models[] = {
      DistributionModel{Pareto{1.0, 2.0}},
      DistributionModel{LogNormal{0.3, 0.8}},
      DistributionModel{PiecewiseEmpirical{{0.5, 1.0, 2.0, 4.0},
                                           {0.2, 0.5, 0.3}}},
  };
  for (const auto& m : models) {
    double mass = 0.0;
    if (const auto* hist = std::get_if<PiecewiseEmpirical>(&m.spec())) {
      // Constant density per bin: the midpoint rule is exact.
      for (std::size_t i = 0; i + 1 < hist->edges.size(); ++i) {
        const double a = hist->edges[i];
        const double b = hist->edges[i + 1];
        mass += m.density(0.5 * (a + b)) * (b - a);
      }
    } else {
      // Log-space panels; uniform ones under-resolve power-law densities
      // near the support floor.
      const double lo = std::max(m.support_floor(), 1e-9);
      const double hi = std::min(m.truncation_point(), 1e7);
      mass = testutil::simpson(
          [&](double v) {
            const double x = std::exp(v);
            return m.density(x) * x;
          },
          std::log(lo), std::log(hi), 200000);
    }
    CHECK(std::abs(mass - 1.0) <= 1e-6);
  }
}

TEST_CASE("cdf is nondecreasing and tail complements it") {
  testutil::Rng rng(5);
  const DistributionModel m{LogNormal{0.5, 1.2}};
  for (int i = 0; i < 300; ++i) {
    const double a = rng.uniform(0.0, 50.0);
    const double b = a + rng.uniform(0.0, 10.0);
    CHECK(m.cdf(b) >= m.cdf(a));
    CHECK(m.cdf(a) + m.tail(a) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("tail truncation raises instead of returning noise") {
  const DistributionModel m{Pareto{1.0, 2.0}};
  CHECK(m.truncation_point() == doctest::Approx(1e6).epsilon(1e-9));
  CHECK_NOTHROW(m.local_pareto_parameter(m.truncation_point() * 0.99));
  CHECK_THROWS_AS(m.local_pareto_parameter(m.truncation_point() * 1.01),
                  tail_truncation_error);
}

TEST_CASE("invalid distribution parameters are rejected") {
  CHECK_THROWS_AS((DistributionModel{Pareto{0.0, 2.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((DistributionModel{Pareto{1.0, -1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((DistributionModel{LogNormal{0.0, 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS((DistributionModel{PiecewiseEmpirical{{1.0, 0.5}, {1.0}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      (DistributionModel{PiecewiseEmpirical{{0.0, 1.0}, {1.0, 2.0}}}),
      std::invalid_argument);
  CHECK_THROWS_AS((DistributionModel{PiecewiseEmpirical{{0.0, 1.0}, {-1.0}}}),
                  std::invalid_argument);
}

#include "assettax/agent.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

#include "test_util.hpp"

using namespace assettax;

namespace {

AgentProfile basic_agent() {
  AgentProfile a;
  a.name = "t";
  a.delta = 0.06;
  a.r = 0.04;
  a.k_init = 10.0;
  a.n = 10.0;
  a.wealth_utility = {WealthUtility::Kind::log_form, 1.0, 0.0};
  a.disutility = {1.0, 1.0};  // h2(s) = s^2 / 2
  return a;
}

IntegratedSchedule linear_prize(double p, double x_max = 50.0) {
  return IntegratedSchedule::linear(ScheduleKind::innovation_prize, p, x_max);
}

ScheduleParams curved_prize_params() {
  ScheduleParams p;
  p.kind = ScheduleKind::innovation_prize;
  p.distribution = std::make_shared<const DistributionModel>(Pareto{1.0, 2.0});
  p.weights = WelfareWeightProfile::power(0.8, *p.distribution, 1.0);
  p.elasticity = ElasticityProfile::constant(0.5);
  p.creation_cost = 1.0;
  return p;
}

}  // namespace

TEST_CASE("functional families and their closed-form inverses") {
  const WealthUtility log_u{WealthUtility::Kind::log_form, 1.0, 0.0};
  CHECK(log_u.deriv(4.0) == 0.25);
  CHECK(log_u.deriv_inverse(0.02) == 50.0);

  const WealthUtility pow_u{WealthUtility::Kind::power_form, 1.0, 2.0};
  CHECK(pow_u.deriv(5.0) == doctest::Approx(0.04));
  CHECK(pow_u.deriv_inverse(0.04) == doctest::Approx(5.0).epsilon(1e-12));

  const InnovationDisutility h2{1.0, 1.0};
  CHECK(h2.value(3.0) == doctest::Approx(4.5));
  CHECK(h2.deriv(3.0) == doctest::Approx(3.0));
  CHECK(h2.deriv_inverse(0.7) == doctest::Approx(0.7));
  CHECK(h2.value(0.0) == 0.0);
}

TEST_CASE("quadratic effort against a linear prize picks s = p") {
  const AgentProfile agent = basic_agent();
  for (const double p : {0.2, 0.5, 0.9}) {
    const SteadyState ss = solve_steady_state(agent, linear_prize(p));
    CHECK(std::abs(ss.innovation_flow - p) <= 1e-8);
    CHECK_FALSE(ss.boundary);
  }
}

TEST_CASE("wealth solves a'(k) = delta - r") {
  const AgentProfile agent = basic_agent();  // beta 1, delta - r = 0.02
  const SteadyState ss = solve_steady_state(agent, linear_prize(0.5));
  CHECK(std::abs(ss.wealth - 50.0) <= 1e-8);
}

TEST_CASE("budget identity holds exactly") {
  AgentProfile agent = basic_agent();
  const IntegratedSchedule sched = linear_prize(std::sqrt(5.0));
  const SteadyState ss = solve_steady_state(agent, sched);
  CHECK(ss.consumption ==
        agent.n + agent.r * ss.wealth + sched.total_at(ss.innovation_flow));
  // n + r k* + P(s*) = 10 + 2 + 5 here.
  CHECK(ss.consumption == doctest::Approx(17.0).epsilon(1e-12));
}

TEST_CASE("present value utility") {
  AgentProfile agent = basic_agent();
  SUBCASE("no wealth adjustment when k equals the endowment") {
    SteadyState ss;
    ss.wealth = agent.k_init;
    ss.flow_utility = 3.25;
    CHECK(present_value_utility(agent, ss) == 3.25);
  }
  SUBCASE("a unit consumption perpetuity is one unit of utility") {
    SteadyState ss;
    ss.consumption = 1.0;
    ss.wealth = agent.k_init;
    ss.flow_utility = 1.0;
    CHECK(present_value_utility(agent, ss) == 1.0);
  }
  SUBCASE("matches the discounted-integral oracle on a constant path") {
    const SteadyState ss = solve_steady_state(agent, linear_prize(0.6));
    const double horizon = 50.0 / agent.delta;
    const double integral = testutil::simpson(
        [&](double t) {
          return agent.delta * ss.flow_utility * std::exp(-agent.delta * t);
        },
        0.0, horizon, 40000);
    const double expected =
        integral + agent.delta * (ss.wealth - agent.k_init);
    CHECK(std::abs(ss.pv_utility - expected) <= 1e-8);
  }
}

TEST_CASE("brute force recovers the closed forms within one grid step") {
  const AgentProfile agent = basic_agent();
  const double p = 0.6;
  const IntegratedSchedule sched = linear_prize(p);
  std::vector<double> s_grid, k_grid;
  for (int i = 0; i < 300; ++i) {
    s_grid.push_back(i * 2.0 / 299.0);
    k_grid.push_back(20.0 + i * 60.0 / 299.0);
  }
  const GridBest best = brute_force_best_response(agent, sched, s_grid, k_grid);
  CHECK(std::abs(best.innovation_flow - p) <= s_grid[1] - s_grid[0] + 1e-12);
  CHECK(std::abs(best.wealth - 50.0) <= k_grid[1] - k_grid[0] + 1e-12);
}

TEST_CASE("zero prize schedule drives innovation to the zero corner") {
  const AgentProfile agent = basic_agent();
  const IntegratedSchedule none = linear_prize(0.0);
  const SteadyState ss = solve_steady_state(agent, none);
  CHECK(ss.innovation_flow == 0.0);

  std::vector<double> s_grid, k_grid;
  for (int i = 0; i < 100; ++i) {
    s_grid.push_back(i * 1.0 / 99.0);
    k_grid.push_back(25.0 + i * 50.0 / 99.0);
  }
  const GridBest best = brute_force_best_response(agent, none, s_grid, k_grid);
  CHECK(best.s_index == 0);
  CHECK(best.innovation_flow == 0.0);
}

TEST_CASE("solver matches the grid oracle on a curved schedule") {
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(i * 0.5);
  const IntegratedSchedule sched =
      integrate_schedule(curved_prize_params(), grid);

  testutil::Rng rng(2718);
  for (int trial = 0; trial < 20; ++trial) {
    AgentProfile agent;
    agent.name = "rand";
    agent.delta = rng.uniform(0.05, 0.09);
    agent.r = agent.delta - rng.uniform(0.005, 0.03);
    agent.k_init = rng.uniform(0.0, 20.0);
    agent.n = rng.uniform(0.0, 10.0);
    if (trial % 2 == 0) {
      agent.wealth_utility = {WealthUtility::Kind::log_form,
                              rng.uniform(0.5, 2.0), 0.0};
    } else {
      agent.wealth_utility = {WealthUtility::Kind::power_form,
                              rng.uniform(0.5, 2.0), rng.uniform(1.5, 3.0)};
    }
    agent.disutility = {rng.uniform(0.6, 1.5), rng.uniform(0.5, 2.0)};

    const SteadyState ss = solve_steady_state(agent, sched);
    const double k_star =
        agent.wealth_utility.deriv_inverse(agent.delta - agent.r);
    const double s_hi = 1.25 * std::max(
        agent.disutility.deriv_inverse(1.0), sched.junction());
    std::vector<double> s_grid, k_grid;
    for (int i = 0; i < 250; ++i) {
      s_grid.push_back(i * std::min(s_hi, 29.0) / 249.0);
      k_grid.push_back(k_star * (0.4 + 1.2 * i / 249.0));
    }
    const GridBest best =
        brute_force_best_response(agent, sched, s_grid, k_grid);
    CHECK(std::abs(best.innovation_flow - ss.innovation_flow) <=
          s_grid[1] - s_grid[0] + 1e-9);
    CHECK(std::abs(best.wealth - ss.wealth) <= k_grid[1] - k_grid[0] + 1e-9);
  }
}

TEST_CASE("floor kink can be the optimum") {
  // Inside the floor the marginal prize is 1; past the junction it drops
  // to the formula value. An agent whose marginal effort cost at the
  // junction lies between the two stays exactly at the junction.
  auto params = curved_prize_params();
  params.creation_cost = 2.0;  // junction at 6
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(i * 0.5);
  const IntegratedSchedule sched = integrate_schedule(params, grid);
  const double after = sched.marginal_at(6.0);
  REQUIRE(after < 1.0);

  AgentProfile agent = basic_agent();
  // Choose psi so h2'(6) = 6/psi sits strictly between after and 1.
  agent.disutility = {1.0, 6.0 / (0.5 * (1.0 + after))};
  const SteadyState ss = solve_steady_state(agent, sched);
  CHECK(ss.innovation_flow == doctest::Approx(6.0).epsilon(1e-10));

  std::vector<double> s_grid, k_grid;
  for (int i = 0; i < 400; ++i) {
    s_grid.push_back(i * 12.0 / 399.0);
    k_grid.push_back(25.0 + i * 50.0 / 399.0);
  }
  const GridBest best = brute_force_best_response(agent, sched, s_grid, k_grid);
  CHECK(std::abs(best.innovation_flow - 6.0) <= s_grid[1] - s_grid[0] + 1e-9);
}

TEST_CASE("wealth choice is independent of the prize schedule") {
  const AgentProfile agent = basic_agent();
  const SteadyState a = solve_steady_state(agent, linear_prize(0.3));
  const SteadyState b = solve_steady_state(agent, linear_prize(0.9));
  CHECK(a.wealth == b.wealth);
}

TEST_CASE("scaling the prize schedule up weakly raises innovation") {
  testutil::Rng rng(1618);
  for (int i = 0; i < 50; ++i) {
    AgentProfile agent = basic_agent();
    agent.disutility = {rng.uniform(0.5, 1.5), rng.uniform(0.5, 2.0)};
    const double p1 = rng.uniform(0.05, 0.6);
    const double p2 = p1 + rng.uniform(0.0, 0.39);
    const SteadyState s1 = solve_steady_state(agent, linear_prize(p1));
    const SteadyState s2 = solve_steady_state(agent, linear_prize(p2));
    CHECK(s2.innovation_flow >= s1.innovation_flow - 1e-10);
  }
}

TEST_CASE("boundary solutions are flagged or rejected") {
  AgentProfile agent = basic_agent();
  // A schedule that ends while marginal gains remain: h2'(x) = x / 40
  // stays below the constant prize marginal 0.9 on [0, 10].
  agent.disutility = {1.0, 40.0};
  const IntegratedSchedule sched = linear_prize(0.9, 10.0);
  const SteadyState ss = solve_steady_state(agent, sched);
  CHECK(ss.boundary);
  CHECK(ss.innovation_flow == 10.0);

  std::vector<double> s_grid, k_grid;
  for (int i = 0; i < 50; ++i) {
    s_grid.push_back(i * 10.0 / 49.0);
    k_grid.push_back(25.0 + i * 50.0 / 49.0);
  }
  CHECK_THROWS_AS(brute_force_best_response(agent, sched, s_grid, k_grid),
                  std::runtime_error);

  // Wealth grid that misses k* = 50 on the high side.
  AgentProfile plain = basic_agent();
  std::vector<double> k_low;
  std::vector<double> s_ok;
  for (int i = 0; i < 50; ++i) {
    k_low.push_back(1.0 + i * 20.0 / 49.0);
    s_ok.push_back(i * 2.0 / 49.0);
  }
  CHECK_THROWS_AS(
      brute_force_best_response(plain, linear_prize(0.5), s_ok, k_low),
      std::runtime_error);
}

TEST_CASE("profile validation") {
  AgentProfile a = basic_agent();
  a.delta = 0.03;  // delta <= r
  CHECK_THROWS_AS(a.validate(), std::domain_error);
  a = basic_agent();
  a.r = 0.0;
  CHECK_THROWS_AS(a.validate(), std::domain_error);
  a = basic_agent();
  a.n = -1.0;
  CHECK_THROWS_AS(a.validate(), std::domain_error);
  a = basic_agent();
  a.wealth_utility = {WealthUtility::Kind::power_form, 1.0, 1.0};
  CHECK_THROWS_AS(a.validate(), std::domain_error);
  a = basic_agent();
  a.disutility = {0.0, 1.0};
  CHECK_THROWS_AS(a.validate(), std::domain_error);
}

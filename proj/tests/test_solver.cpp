#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riemctl/problems.hpp"
#include "riemctl/solver.hpp"
#include "support/oracles.hpp"

using namespace riemctl;

TEST_CASE("analytic optima") {
  // frozen oracle: root of 2u = cos(u) and the induced cost
  CHECK(analytic_optimum("h3-example", 1.0) ==
        doctest::Approx(oracles::kH3OptimalCostUnitHorizon).epsilon(1e-10));
  CHECK(std::abs(analytic_optimum("h3-example", 1.0) - 0.76750) < 1e-4);
  CHECK(analytic_optimum("s2-example", 1.0) ==
        doctest::Approx(oracles::kPi * oracles::kPi / 4.0).epsilon(1e-12));
  CHECK(analytic_optimum("s2-example", 2.0) ==
        doctest::Approx(oracles::kPi * oracles::kPi / 8.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)analytic_optimum("unknown", 1.0), ConfigError);
}

TEST_CASE("config validation") {
  const ControlSystem sys = build_h3_example(1.0);
  SolveConfig config;
  config.segments = 0;
  CHECK_THROWS_AS((void)solve(sys, config), ConfigError);
  config.segments = 4;
  config.penalty_growth = 1.0;
  CHECK_THROWS_AS((void)solve(sys, config), ConfigError);
}

TEST_CASE("hyperbolic example solve reaches the derived optimum") {
  const ControlSystem sys = build_h3_example(1.0);
  SolveConfig config;
  config.segments = 4;
  config.starts = 8;
  config.seed = 7;
  const SolveResult result = solve(sys, config);

  CHECK(result.feasible);
  CHECK(result.feasibility.endpoint_residual <= 1e-3);
  CHECK(result.best_cost <= 0.78);
  CHECK(result.best_cost >= analytic_optimum("h3-example", 1.0) - 1e-3);

  SUBCASE("trace is non-increasing") {
    REQUIRE(!result.trace.empty());
    for (std::size_t i = 0; i + 1 < result.trace.size(); ++i)
      CHECK(result.trace[i + 1] <= result.trace[i] + 1e-12);
  }

  SUBCASE("reported cost equals re-integrated cost") {
    const Trajectory traj =
        integrate(sys, result.best_signal, sys.initial_state, config.step);
    CHECK(std::abs(evaluate_cost(sys, result.best_signal, traj) - result.best_cost) <= 1e-9);
  }

  SUBCASE("the lower boundary binds at the optimum") {
    const Trajectory traj =
        integrate(sys, result.best_signal, sys.initial_state, config.step);
    const double ratio = traj.back().rep[2] / std::exp(1.0);
    CHECK(ratio >= 1.0 - 1e-3);
    CHECK(ratio <= 1.01);
  }
}

TEST_CASE("refinement") {
  const ControlSystem sys = build_h3_example(1.0);
  SolveConfig config;
  config.segments = 4;
  config.starts = 6;
  config.seed = 3;
  const SolveResult coarse = solve(sys, config);

  SUBCASE("warm start with zero iterations reproduces the old cost exactly") {
    SolveConfig frozen = config;
    frozen.simplex_max_iterations = 1;
    frozen.penalty_rounds = 1;
    // Hand the previous best through refine: the split signal must integrate
    // identically on the doubled dyadic grid.
    const SolveResult refined = refine(sys, coarse, frozen);
    CHECK(refined.segments == 8);
    CHECK(refined.best_cost <= coarse.best_cost + 1e-9);
    const Trajectory traj =
        integrate(sys, coarse.best_signal.split_segments(), sys.initial_state, config.step);
    CHECK(evaluate_cost(sys, coarse.best_signal.split_segments(), traj) ==
          doctest::Approx(coarse.best_cost).epsilon(1e-15));
  }

  SUBCASE("cost is non-increasing across refinement rounds 4 -> 8 -> 16") {
    const SolveResult r8 = refine(sys, coarse, config);
    const SolveResult r16 = refine(sys, r8, config);
    CHECK(r8.segments == 8);
    CHECK(r16.segments == 16);
    CHECK(r8.best_cost <= coarse.best_cost + 1e-9);
    CHECK(r16.best_cost <= r8.best_cost + 1e-9);
    CHECK(r16.feasible);
    for (std::size_t i = 0; i + 1 < r16.trace.size(); ++i)
      CHECK(r16.trace[i + 1] <= r16.trace[i] + 1e-12);
  }
}

TEST_CASE("sphere example solve approaches the geodesic optimum") {
  const ControlSystem sys = build_s2_example(1.0, 10.0);
  SolveConfig config;
  config.segments = 4;
  config.starts = 6;
  config.seed = 11;
  const SolveResult result = solve(sys, config);
  CHECK(result.feasible);
  const double optimum = analytic_optimum("s2-example", 1.0);
  CHECK(result.best_cost <= optimum * 1.05);
  CHECK(result.best_cost >= optimum - 1e-3);

  SUBCASE("relaxed endpoint makes staying put optimal") {
    ControlSystem relaxed = sys;
    relaxed.endpoint_residual = [](const Point&, const Point&) { return 0.0; };
    relaxed.reference_signal =
        ControlSignal::constant(1.0, 1, make_vec({0.0, 0.0, 0.0}));
    SolveConfig quick = config;
    quick.starts = 4;
    const SolveResult rest = solve(relaxed, quick);
    CHECK(rest.feasible);
    CHECK(rest.best_cost <= 1e-4);
  }
}

TEST_CASE("seed determinism of solve") {
  const ControlSystem sys = build_h3_example(1.0);
  SolveConfig config;
  config.segments = 2;
  config.starts = 4;
  config.seed = 99;
  config.penalty_rounds = 2;
  const SolveResult a = solve(sys, config);
  const SolveResult b = solve(sys, config);
  CHECK(a.best_cost == b.best_cost);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i] == b.trace[i]);
  REQUIRE(a.best_signal.values.size() == b.best_signal.values.size());
  for (std::size_t i = 0; i < a.best_signal.values.size(); ++i)
    CHECK((a.best_signal.values[i] - b.best_signal.values[i]).norm() == 0.0);
}

TEST_CASE("unreachable endpoint sets produce flagged least-infeasible results") {
  // |u| <= 0.6 can turn at most 0.6 < pi/2 radians in unit time, so the
  // endpoint set is unreachable.
  const ControlSystem sys = build_s2_example(1.0, 0.6);
  CHECK(!sys.reference_signal.has_value());
  SolveConfig config;
  config.segments = 2;
  config.starts = 4;
  config.seed = 17;
  config.penalty_rounds = 3;
  const SolveResult result = solve(sys, config);
  CHECK(!result.feasible);
  CHECK(result.infeasible_flag);
  CHECK(result.trace.empty());  // no admissible pair was ever found
  // best effort: the solver turns as far as it can, residual ~ sqrt(2) - |x(T) - N|
  CHECK(result.feasibility.endpoint_residual < std::sqrt(2.0));

  SUBCASE("refining an infeasible result keeps or reduces residuals") {
    const SolveResult refined = refine(sys, result, config);
    CHECK(refined.segments == 4);
    CHECK(refined.feasibility.worst() <= result.feasibility.worst() + 1e-12);
  }
}

TEST_CASE("solve on the synthetic problem is trivially feasible") {
  const ControlSystem sys = build_nonconvex_synthetic();
  SolveConfig config;
  config.segments = 2;
  config.starts = 3;
  config.penalty_rounds = 2;
  const SolveResult result = solve(sys, config);
  CHECK(result.feasible);
  CHECK(result.best_cost == doctest::Approx(0.0));
  CHECK(!result.infeasible_flag);
}

#include <doctest.h>

#include <cmath>

#include "optswitch/evaluator.hpp"
#include "optswitch/oracle.hpp"
#include "optswitch/solver.hpp"
#include "support.hpp"

using namespace optswitch;
using namespace testsupport;

namespace {

double node_diff(const SolutionField& sol, const OracleResult& oracle) {
  double worst = 0.0;
  for (int j = 0; j < sol.modes; ++j)
    for (int n = 0; n <= sol.steps; ++n)
      for (int k = 0; k <= n; ++k)
        worst = std::max(worst, std::fabs(sol.Y[j](n, k) - oracle.values[j](n, k)));
  return worst;
}

}  // namespace

TEST_CASE("degenerate grid: no ambiguity makes the game a plain DP") {
  for (std::uint64_t seed = 2000; seed < 2010; ++seed) {
    SpecCase c = random_valid_spec(seed);
    c.spec.ambiguity.kappa = 0.0;
    Lattice lat = lattice_for(c);
    SolutionField sol = solve_direct(c.spec, lat);
    OracleResult oracle = game_dp(c.spec, lat, std::vector<double>{0.0});
    CHECK(node_diff(sol, oracle) <= 1e-12);
  }
}

TEST_CASE("game DP with endpoint grid matches the solver node-wise") {
  for (std::uint64_t seed = 2100; seed < 2120; ++seed) {
    SpecCase c = random_valid_spec(seed);
    Lattice lat = lattice_for(c);
    SolutionField sol = solve_direct(c.spec, lat);
    OracleResult oracle = game_dp(c.spec, lat, drift_grid(c.spec.ambiguity, 3));
    CHECK(std::fabs(sol.Y[c.spec.start_mode](0, 0) - oracle.start_values[c.spec.start_mode]) <=
          1e-10);
    CHECK(node_diff(sol, oracle) <= 1e-9);
  }
}

TEST_CASE("linear terminal: game value is x0 - kappa*T") {
  ProblemSpec spec = single_mode_spec("0", "x", 0.5);
  Lattice lat = build_lattice(spec.factor, spec.horizon, 16);
  OracleResult oracle = game_dp(spec, lat, drift_grid(spec.ambiguity, 3));
  CHECK(oracle.start_values[0] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("a finer adversary grid never helps the controller") {
  for (std::uint64_t seed = 2200; seed < 2210; ++seed) {
    SpecCase c = random_valid_spec(seed);
    Lattice lat = lattice_for(c);
    OracleResult coarse = game_dp(c.spec, lat, drift_grid(c.spec.ambiguity, 3));
    OracleResult fine = game_dp(c.spec, lat, drift_grid(c.spec.ambiguity, 9));
    for (int j = 0; j < c.spec.modes; ++j)
      for (int n = 0; n <= c.steps; ++n)
        for (int k = 0; k <= n; ++k) CHECK(fine.values[j](n, k) <= coarse.values[j](n, k) + 1e-15);
  }
}

TEST_CASE("finite drift set: solver and oracle agree over the full list") {
  std::string amb = "kind = \"finite_set\"\nvalues = \"-0.3, 0.05, 0.2\"\n";
  ProblemSpec spec = load_spec(spec_text(1.0, 2, 1, geometric_block(1.0, 0.1, 0.3), amb,
                                         {"x - 1", "0"}, {"0", "0"},
                                         {{"", "0.25"}, {"0.25", ""}}));
  Lattice lat = build_lattice(spec.factor, spec.horizon, 10);
  REQUIRE(validate(spec, lat).ok());
  SolutionField sol = solve_direct(spec, lat);
  OracleResult oracle = game_dp(spec, lat, spec.ambiguity.values);
  CHECK(node_diff(sol, oracle) <= 1e-10);

  // saddle both ways with the extracted pair
  Policy pol = extract_policy(spec, lat, sol);
  ControlTable ctl = worst_control(spec, lat, sol);
  double y0 = sol.Y[0](0, 0);
  CHECK(std::fabs(evaluate_exact(spec, lat, pol, ctl).estimate - y0) <= 1e-12);
  for (int i = 0; i < 10; ++i) {
    ControlTable rc = random_control(spec, lat, spec.ambiguity.values, 4000 + i);
    CHECK(evaluate_exact(spec, lat, pol, rc).estimate >= y0 - 1e-12);
  }
}

TEST_CASE("grid must span the interval endpoints") {
  SpecCase c = random_valid_spec(2300);
  c.spec.ambiguity.kappa = 0.5;
  Lattice lat = lattice_for(c);
  CHECK_THROWS_AS(game_dp(c.spec, lat, std::vector<double>{-0.25, 0.0, 0.25}), Error);
}

TEST_CASE("single mode: exactly one table, value equals the game DP") {
  ProblemSpec spec = single_mode_spec("x", "max(x, 0)", 0.4);
  Lattice lat = build_lattice(spec.factor, spec.horizon, 6);
  auto grid = drift_grid(spec.ambiguity, 3);
  OracleResult best = enumerate_policies(spec, lat, grid);
  OracleResult game = game_dp(spec, lat, grid);
  CHECK(best.start_values[0] == game.start_values[0]);
  CHECK(best.has_best_policy);
  for (int n = 0; n <= 6; ++n)
    for (int k = 0; k <= n; ++k) CHECK(best.best_policy.stays(n, k, 0));
}

TEST_CASE("exhaustive enumeration reproduces the solver on small instances") {
  for (std::uint64_t seed = 2400; seed < 2410; ++seed) {
    SpecCase c = random_valid_spec(seed, /*max_modes=*/2, /*min_steps=*/2, /*max_steps=*/4);
    // force two modes so switching is actually exercised
    while (c.spec.modes != 2) c = random_valid_spec(++seed * 13, 2, 2, 4);
    Lattice lat = lattice_for(c);
    auto grid = drift_grid(c.spec.ambiguity, 3);

    SolutionField sol = solve_direct(c.spec, lat);
    OracleResult best = enumerate_policies(c.spec, lat, grid);
    OracleResult game = game_dp(c.spec, lat, grid);

    CHECK(std::fabs(best.start_values[c.spec.start_mode] - sol.Y[c.spec.start_mode](0, 0)) <=
          1e-10);
    for (int j = 0; j < c.spec.modes; ++j)
      CHECK(best.start_values[j] <= game.start_values[j] + 1e-12);
  }
}

TEST_CASE("enumeration finds the immediate switch on the deterministic instance") {
  ProblemSpec spec = deterministic_two_mode_spec();
  Lattice lat = build_lattice(spec.factor, spec.horizon, 4);
  OracleResult best = enumerate_policies(spec, lat, std::vector<double>{0.0});
  CHECK(best.start_values[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(best.start_values[1] == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(best.has_best_policy);
  CHECK(!best.best_policy.stays(0, 0, 0));
  CHECK(best.best_policy.target(0, 0, 0) == 1);
}

TEST_CASE("search space guard") {
  SpecCase c = random_valid_spec(2500, 2, 5, 5, /*force_all_open=*/true);
  while (c.spec.modes != 2) c = random_valid_spec(c.steps + 2500, 2, 5, 5, true);
  Lattice lat = lattice_for(c);  // 15 choice nodes per mode -> 2^30 tables
  try {
    enumerate_policies(c.spec, lat, drift_grid(c.spec.ambiguity, 3));
    FAIL("expected SearchSpaceTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SearchSpaceTooLarge);
  }
}

TEST_CASE("policy_worst_value agrees with exact evaluation at its own argmin") {
  for (std::uint64_t seed = 2600; seed < 2610; ++seed) {
    SpecCase c = random_valid_spec(seed);
    Lattice lat = lattice_for(c);
    auto grid = drift_grid(c.spec.ambiguity, 5);
    Policy pol = random_policy(c.spec, lat, seed);
    PolicyValue pv = policy_worst_value(c.spec, lat, pol, grid);
    EvalReport rep = evaluate_exact(c.spec, lat, pol, pv.control);
    CHECK(std::fabs(rep.estimate - pv.value) <= 1e-12);
  }
}

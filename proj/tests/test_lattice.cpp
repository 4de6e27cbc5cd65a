#include <doctest.h>

#include <cmath>

#include "optswitch/lattice.hpp"
#include "optswitch/rng.hpp"

using namespace optswitch;

namespace {

AmbiguityModel kappa_model(double kappa) {
  AmbiguityModel amb;
  amb.kappa = kappa;
  return amb;
}

}  // namespace

TEST_CASE("arithmetic node formula") {
  FactorModel f{FactorModel::Kind::Arithmetic, 0.0, 0.0, 1.0};
  Lattice lat = build_lattice(f, 1.0, 2);
  CHECK(lat.state(2, 0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-15));
  CHECK(lat.state(2, 1) == 0.0);
  CHECK(lat.state(2, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(lat.time(2) == 1.0);
}

TEST_CASE("geometric node formula") {
  FactorModel f{FactorModel::Kind::Geometric, 1.0, 0.0, 0.2};
  Lattice lat = build_lattice(f, 1.0, 1);
  CHECK(lat.state(1, 1) == doctest::Approx(std::exp(0.18)).epsilon(1e-15));
  CHECK(lat.state(1, 0) == doctest::Approx(std::exp(-0.22)).epsilon(1e-15));
  CHECK(lat.state(0, 0) == 1.0);
}

TEST_CASE("bad inputs") {
  FactorModel f{FactorModel::Kind::Arithmetic, 0.0, 0.0, 1.0};
  CHECK_THROWS_AS(build_lattice(f, 1.0, 0), Error);
  f.vol = 0.0;
  CHECK_THROWS_AS(build_lattice(f, 1.0, 4), Error);
  FactorModel g{FactorModel::Kind::Geometric, 0.0, 0.0, 0.2};
  CHECK_THROWS_AS(build_lattice(g, 1.0, 4), Error);
}

TEST_CASE("recombination: geometric nodes positive, layers sized n+1") {
  FactorModel f{FactorModel::Kind::Geometric, 1.5, 0.1, 0.4};
  Lattice lat = build_lattice(f, 2.0, 30);
  for (int n = 0; n <= 30; ++n)
    for (int k = 0; k <= n; ++k) {
      CHECK(lat.state(n, k) > 0.0);
      // up-then-down and down-then-up both land on (n+2, k+1), which carries
      // the same walk coordinate as (n, k)
      if (n + 2 <= 30) CHECK(lat.walk(n + 2, k + 1) == lat.walk(n, k));
    }
}

TEST_CASE("controlled step probability") {
  FactorModel f{FactorModel::Kind::Arithmetic, 0.0, 0.0, 1.0};
  Lattice lat = build_lattice(f, 1.0, 100);  // dt = 0.01
  AmbiguityModel amb = kappa_model(0.5);

  CHECK(controlled_up_probability(lat, amb, 0.0, 0, 0) == 0.5);
  CHECK(controlled_up_probability(lat, amb, -0.5, 0, 0) == doctest::Approx(0.475).epsilon(1e-15));

  AmbiguityModel big = kappa_model(20.0);
  try {
    controlled_up_probability(lat, big, 20.0, 0, 0);
    FAIL("expected StepTooCoarse");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StepTooCoarse);
  }
  CHECK_THROWS_AS(controlled_up_probability(lat, amb, 0.6, 0, 0), Error);  // outside the set
}

TEST_CASE("exact drift identity of the shifted step") {
  FactorModel f{FactorModel::Kind::Arithmetic, 0.0, 0.0, 1.0};
  RandomStream rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    int steps = 1 + rng.below(400);
    Lattice lat = build_lattice(f, rng.uniform(0.25, 4.0), steps);
    AmbiguityModel amb = kappa_model(2.0);
    double u = rng.uniform(-2.0, 2.0);
    if (std::fabs(u) * lat.sqrt_dt() >= 1.0) continue;
    double up = rng.uniform(-10.0, 10.0);
    double dn = rng.uniform(-10.0, 10.0);

    double p = controlled_up_probability(lat, amb, u, 0, 0);
    double lhs = p * up + (1.0 - p) * dn - 0.5 * (up + dn);
    double z = (up - dn) / (2.0 * lat.sqrt_dt());
    double rhs = lat.dt() * u * z;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    CHECK(std::fabs(lhs - rhs) <= 1e-14 * (1.0 + std::fabs(rhs)));
  }
}

TEST_CASE("one-step moment match under the reference measure") {
  FactorModel f{FactorModel::Kind::Arithmetic, 0.0, 0.0, 1.0};
  Lattice lat = build_lattice(f, 1.0, 7);
  for (int n = 0; n < 7; ++n)
    for (int k = 0; k <= n; ++k) {
      double w = lat.walk(n, k);
      double mean = 0.5 * (lat.walk(n + 1, k + 1) - w) + 0.5 * (lat.walk(n + 1, k) - w);
      double var = 0.5 * std::pow(lat.walk(n + 1, k + 1) - w, 2) +
                   0.5 * std::pow(lat.walk(n + 1, k) - w, 2);
      // stored coordinates carry one rounding each; the identity is exact in
      // the walk recursion itself
      CHECK(std::fabs(mean) <= 4e-16 * (n + 1));
      CHECK(std::fabs(var - lat.dt()) <= 8e-16 * (n + 1) * lat.dt() + 1e-18);
    }
}

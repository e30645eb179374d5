#include <catch2/catch_amalgamated.hpp>

#include "isolip/prohorov.hpp"
#include "oracle_helpers.hpp"

using namespace isolip;

TEST_CASE("Prohorov distance on pinned instances", "[prohorov]") {
  const AtomicMeasure d0 = AtomicMeasure::dirac(0.0);
  const AtomicMeasure d1 = AtomicMeasure::dirac(1.0);
  const AtomicMeasure u01 = AtomicMeasure::uniform({0.0, 1.0});
  REQUIRE(prohorov(d0, d0) == 0.0);
  REQUIRE(prohorov(u01, u01) == 0.0);
  REQUIRE(prohorov(d0, d1) == Catch::Approx(1.0));
  REQUIRE(prohorov(u01, d0) == Catch::Approx(0.5));
  REQUIRE_THROWS_AS(prohorov(AtomicMeasure({0.0}, {0.5}), d0), std::invalid_argument);
}

TEST_CASE("Prohorov agrees with the min-cut oracle on small supports", "[prohorov]") {
  Rng rng(1001);
  for (int round = 0; round < 120; ++round) {
    const AtomicMeasure mu = oracle::random_measure(rng, 4);
    const AtomicMeasure nu = oracle::random_measure(rng, 4);
    REQUIRE(prohorov(mu, nu) ==
            Catch::Approx(oracle::prohorov_oracle(mu, nu)).margin(1e-9));
  }
}

TEST_CASE("Prohorov is a metric on random triples", "[prohorov]") {
  Rng rng(2002);
  for (int round = 0; round < 60; ++round) {
    const AtomicMeasure a = oracle::random_measure(rng, 5);
    const AtomicMeasure b = oracle::random_measure(rng, 5);
    const AtomicMeasure c = oracle::random_measure(rng, 5);
    const double ab = prohorov(a, b), ba = prohorov(b, a);
    REQUIRE(ab == Catch::Approx(ba).margin(1e-9));
    REQUIRE(prohorov(a, c) <= ab + prohorov(b, c) + 1e-9);
    REQUIRE(ab >= 0.0);
  }
}

TEST_CASE("coupling distortions dominate the distance and the optimum attains it",
          "[prohorov]") {
  // the two routes to the distance: inf over couplings of dis_delta equals
  // the threshold-sweep value, and the returned optimal coupling attains it
  Rng rng(2718);
  for (int round = 0; round < 60; ++round) {
    const AtomicMeasure mu = oracle::random_measure(rng, 5);
    const AtomicMeasure nu = oracle::random_measure(rng, 5);
    const double dp = prohorov(mu, nu);
    REQUIRE(dis_delta(quantile_coupling(mu, nu)) >= dp - 1e-9);
    const auto best = prohorov_with_plan(mu, nu);
    REQUIRE(dis_delta(best.plan) == Catch::Approx(dp).margin(1e-9));
  }
}

TEST_CASE("the returned plan witnesses the distance", "[prohorov]") {
  Rng rng(3003);
  for (int round = 0; round < 40; ++round) {
    const AtomicMeasure mu = oracle::random_measure(rng, 5);
    const AtomicMeasure nu = oracle::random_measure(rng, 5);
    const auto res = prohorov_with_plan(mu, nu);
    REQUIRE(is_transport_plan(res.plan, mu, nu));
    double outside = 0.0;
    for (const auto& cell : res.plan.cells()) {
      const double d = std::abs(res.plan.row_atoms()[cell.row] - res.plan.col_atoms()[cell.col]);
      if (d > res.distance + 1e-12) outside += cell.mass;
    }
    REQUIRE(outside <= res.distance + 1e-9);
  }
}

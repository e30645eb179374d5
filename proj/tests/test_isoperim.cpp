#include <catch2/catch_amalgamated.hpp>

#include "isolip/isoperim.hpp"

using namespace isolip;

namespace {

FiniteMMSpace two_points() { return FiniteMMSpace(2, {0, 1, 1, 0}, {0.5, 0.5}); }

std::vector<ScalarField> distance_family(const FiniteMMSpace& x) {
  std::vector<ScalarField> family;
  for (std::size_t p = 0; p < x.size(); ++p) family.push_back(distance_field(x, p));
  return family;
}

}  // namespace

TEST_CASE("isoperimetric profile of tiny spaces", "[isoperim]") {
  const auto at_one = isoperimetric_profile(two_points(), 1.0);
  REQUIRE(at_one.at_volume(0.5) != nullptr);
  REQUIRE(at_one.at_volume(0.5)->value == Catch::Approx(1.0));

  const auto at_zero = isoperimetric_profile(two_points(), 0.0);
  REQUIRE(at_zero.at_volume(0.5)->value == Catch::Approx(0.5));

  const auto cube = isoperimetric_profile(make_cube(2, 2), 1.0);
  REQUIRE(cube.at_volume(0.25)->value == Catch::Approx(0.75));
  REQUIRE(cube.at_volume(0.25)->witness.size() == 1);

  // I^0(v) = v on finite spaces, and the profile is monotone in eps
  const auto cube0 = isoperimetric_profile(make_cube(2, 2), 0.0);
  for (const auto& e : cube0.entries) REQUIRE(e.value == Catch::Approx(e.volume).margin(1e-12));
  for (const auto& e : cube.entries) {
    REQUIRE(e.value >= e.volume - 1e-12);
    REQUIRE(e.value >= cube0.at_volume(e.volume)->value - 1e-12);
  }

  REQUIRE_THROWS_AS(isoperimetric_profile(make_cube(5, 2), 1.0, 22), budget_error);
}

TEST_CASE("ICL holds on the cube pushforwards", "[isoperim]") {
  const FiniteMMSpace k21 = make_cube(2, 1);
  REQUIRE(check_icl(k21, k21.distance_pushforward(0), 0.0).pass);

  const FiniteMMSpace k22 = make_cube(2, 2);
  REQUIRE(check_icl(k22, k22.distance_pushforward(0), 0.0).pass);

  REQUIRE(check_icl(k21, AtomicMeasure::dirac(0.0), 0.0).pass);
}

TEST_CASE("ICL violations report the first witnessing triple", "[isoperim]") {
  // atoms half a unit apart ask a point to reach its neighbor at radius 0.5,
  // but the two points sit at distance 1
  const auto bad = check_icl(two_points(), AtomicMeasure::uniform({0.0, 0.5}), 0.0);
  REQUIRE_FALSE(bad.pass);
  REQUIRE(bad.violation.has_value());
  REQUIRE(bad.violation->a == 0.0);
  REQUIRE(bad.violation->b == 0.5);
  REQUIRE(bad.violation->witness == std::vector<std::size_t>{0});
  REQUIRE(bad.violation->required == Catch::Approx(1.0));
  REQUIRE(bad.violation->achieved == Catch::Approx(0.5));

  // ICL is monotone in eps: the same instance passes once eps covers the gap
  REQUIRE(check_icl(two_points(), AtomicMeasure::uniform({0.0, 0.5}), 0.5).pass);
}

TEST_CASE("ICL implies IC+ on the tested instances", "[isoperim]") {
  for (int k : {2, 3}) {
    for (int n : {1, 2}) {
      const FiniteMMSpace x = make_cube(k, n);
      const AtomicMeasure nu = x.distance_pushforward(0);
      REQUIRE(check_icl(x, nu, 0.0).pass);
      REQUIRE(check_ic_plus(x, nu, 0.0).pass);
    }
  }
}

TEST_CASE("IC+ on the edge space", "[isoperim]") {
  const FiniteMMSpace x = two_points();
  const auto pass = check_ic_plus(x, AtomicMeasure::uniform({0.0, 1.0}), 0.0);
  REQUIRE(pass.pass);
  REQUIRE(pass.cases.size() == 1);
  REQUIRE(pass.cases[0].profile_value == Catch::Approx(1.0));

  // delta+(0) = 0.5 but B_{0.5} of a point stays put, so the condition fails
  const auto fail = check_ic_plus(x, AtomicMeasure::uniform({0.0, 0.5}), 0.0);
  REQUIRE_FALSE(fail.pass);
  REQUIRE(fail.cases[0].profile_value == Catch::Approx(0.5));
  REQUIRE(fail.cases[0].required == Catch::Approx(1.0));

  // a wide gap is fine: delta+(0) = 3 reaches the other point
  REQUIRE(check_ic_plus(x, AtomicMeasure::uniform({0.0, 3.0}), 0.0).pass);
}

TEST_CASE("IC+ reports vacuous support points", "[isoperim]") {
  // V(0) = 1/3 is not an achievable volume of the two-point space
  const auto rep = check_ic_plus(two_points(), AtomicMeasure({0.0, 1.0}, {1.0 / 3, 2.0 / 3}), 0.0);
  REQUIRE(rep.cases.size() == 1);
  REQUIRE(rep.cases[0].vacuous);
  REQUIRE(rep.pass);  // no non-vacuous case fails
}

TEST_CASE("IC+ to ICL bound", "[isoperim]") {
  const FiniteMMSpace k22 = make_cube(2, 2);
  const auto rep = icl_from_ic_plus_bound(k22, k22.distance_pushforward(0), 0.0);
  REQUIRE(rep.hypothesis_ok);
  REQUIRE(rep.ic_plus->pass);
  REQUIRE(rep.icl->pass);
  REQUIRE(rep.implication_ok);

  const FiniteMMSpace k31 = make_cube(3, 1);
  REQUIRE(icl_from_ic_plus_bound(k31, k31.distance_pushforward(0), 0.0).implication_ok);

  const FiniteMMSpace skew(2, {0, 1, 1, 0}, {0.25, 0.75});
  const auto bad = icl_from_ic_plus_bound(skew, AtomicMeasure::uniform({0.0, 1.0}), 0.0);
  REQUIRE_FALSE(bad.hypothesis_ok);
  REQUIRE(bad.hypothesis_issue == "space measure is not uniform");
}

TEST_CASE("ICL to iso-dominance", "[isoperim]") {
  const FiniteMMSpace k22 = make_cube(2, 2);
  const AtomicMeasure nu = k22.distance_pushforward(0);
  const auto rep = icl_to_dominant(k22, nu, 0.0, distance_family(k22));
  REQUIRE(rep.side_condition_ok);
  REQUIRE(rep.delta == Catch::Approx(1.0));
  REQUIRE(rep.icl->pass);
  REQUIRE(rep.dominance->all_pass);
  REQUIRE(rep.implication_ok);

  const FiniteMMSpace k21 = make_cube(2, 1);
  REQUIRE(icl_to_dominant(k21, k21.distance_pushforward(0), 0.0, distance_family(k21))
              .implication_ok);

  // side condition: nu(min atom) must not exceed any point mass
  const auto blocked = icl_to_dominant(k22, AtomicMeasure::dirac(0.0), 0.0, {});
  REQUIRE_FALSE(blocked.side_condition_ok);
  REQUIRE_FALSE(blocked.icl.has_value());
}

TEST_CASE("iso-dominance to ICL", "[isoperim]") {
  const FiniteMMSpace k22 = make_cube(2, 2);
  const AtomicMeasure nu = k22.distance_pushforward(0);
  const auto rep = dominant_to_icl(k22, nu, 1.0, distance_family(k22));
  REQUIRE(rep.dominance.all_pass);
  REQUIRE(rep.icl->pass);
  REQUIRE(rep.verdict == "pass");

  const FiniteMMSpace k21 = make_cube(2, 1);
  const auto edge = dominant_to_icl(k21, k21.distance_pushforward(0), 0.0,
                                    distance_family(k21));
  REQUIRE(edge.verdict == "pass");

  // a failing sampled premise is reported as such, not as a violation
  const auto failed = dominant_to_icl(k21, AtomicMeasure::dirac(0.0), 0.0,
                                      distance_family(k21));
  REQUIRE(failed.verdict == "premise failed on supplied family");
  REQUIRE_FALSE(failed.icl.has_value());
}

TEST_CASE("ICL holds exhaustively on 16-point instances", "[isoperim]") {
  const FiniteMMSpace cube4 = make_cube(2, 4);
  REQUIRE(check_icl(cube4, cube4.distance_pushforward(0), 0.0).pass);
  const FiniteMMSpace torus2 = make_torus(4, 2);
  REQUIRE(check_icl(torus2, torus2.distance_pushforward(0), 0.0).pass);
}

TEST_CASE("sweeps are deterministic", "[isoperim]") {
  const FiniteMMSpace x = make_cube(2, 2);
  const AtomicMeasure nu = x.distance_pushforward(0);
  const auto a = isoperimetric_profile(x, 1.0);
  const auto b = isoperimetric_profile(x, 1.0);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    REQUIRE(a.entries[i].volume == b.entries[i].volume);
    REQUIRE(a.entries[i].value == b.entries[i].value);
    REQUIRE(a.entries[i].witness == b.entries[i].witness);
  }
}

#include <catch2/catch_amalgamated.hpp>

#include "isolip/mmspace.hpp"

using namespace isolip;

TEST_CASE("validate_metric reports each broken axiom with witnesses", "[mmspace]") {
  const FiniteMMSpace two(2, {0, 1, 1, 0}, {0.5, 0.5});
  REQUIRE(two.validate_metric().ok());

  // d(a,b)=1, d(b,c)=1, d(a,c)=3 breaks the triangle inequality
  const FiniteMMSpace tri(3, {0, 1, 3, 1, 0, 1, 3, 1, 0}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto rep = tri.validate_metric();
  REQUIRE_FALSE(rep.ok());
  bool found = false;
  for (const auto& v : rep.violations)
    if (v.kind == MetricViolation::Kind::Triangle) found = true;
  REQUIRE(found);

  const FiniteMMSpace asym(2, {0, 1, 2, 0}, {0.5, 0.5});
  const auto rep2 = asym.validate_metric();
  REQUIRE_FALSE(rep2.ok());
  REQUIRE(rep2.violations.front().kind == MetricViolation::Kind::Symmetry);
}

TEST_CASE("cube constructor", "[mmspace]") {
  const FiniteMMSpace k2 = make_cube(2, 1);
  REQUIRE(k2.size() == 2);
  REQUIRE(k2.dist(0, 1) == 1.0);

  const FiniteMMSpace k22 = make_cube(2, 2);
  REQUIRE(k22.size() == 4);
  REQUIRE(k22.diameter() == 2.0);
  REQUIRE(k22.validate_metric().ok());

  const FiniteMMSpace k32 = make_cube(3, 2, 1.0 / 3.0);
  REQUIRE(k32.size() == 9);
  REQUIRE(k32.diameter() == Catch::Approx(4.0 / 3.0));
  REQUIRE(k32.validate_metric().ok());

  REQUIRE_THROWS_AS(make_cube(2, 20), budget_error);
  REQUIRE_THROWS_AS(make_cube(1, 1), std::invalid_argument);
}

TEST_CASE("cube scaling is exact", "[mmspace]") {
  const FiniteMMSpace unit = make_cube(3, 2, 1.0);
  const FiniteMMSpace scaled = make_cube(3, 2, 0.25);
  for (std::size_t i = 0; i < unit.size(); ++i)
    for (std::size_t j = 0; j < unit.size(); ++j)
      REQUIRE(scaled.dist(i, j) == 0.25 * unit.dist(i, j));
}

TEST_CASE("torus constructor", "[mmspace]") {
  const FiniteMMSpace t2 = make_torus(2, 1);
  REQUIRE(t2.size() == 2);
  REQUIRE(t2.dist(0, 1) == 1.0);

  const FiniteMMSpace t4 = make_torus(4, 1);
  REQUIRE(t4.dist(0, 1) == 1.0);
  REQUIRE(t4.dist(0, 2) == 2.0);
  REQUIRE(t4.dist(0, 3) == 1.0);
  REQUIRE(t4.validate_metric().ok());

  const FiniteMMSpace t42 = make_torus(4, 2);
  REQUIRE(t42.diameter() == 4.0);

  REQUIRE_THROWS_AS(make_torus(3, 1), std::invalid_argument);
}

TEST_CASE("product graphs carry the summed path metric", "[mmspace]") {
  const FiniteMMSpace single = make_product_graph({complete_graph(2)});
  REQUIRE(single.size() == 2);
  REQUIRE(single.dist(0, 1) == 1.0);

  const FiniteMMSpace q2 = make_product_graph({complete_graph(2), complete_graph(2)});
  REQUIRE(q2.size() == 4);
  REQUIRE(q2.diameter() == 2.0);
  const FiniteMMSpace cube22 = make_cube(2, 2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) REQUIRE(q2.dist(i, j) == cube22.dist(i, j));

  const FiniteMMSpace pc = make_product_graph({path_graph(3), cycle_graph(3)});
  REQUIRE(pc.size() == 9);
  REQUIRE(pc.diameter() == 3.0);  // path eccentricity 2 plus triangle eccentricity 1
  REQUIRE(pc.validate_metric().ok());

  Graph disconnected{3, {{0, 1}}};
  REQUIRE_THROWS_AS(make_product_graph({disconnected}), std::invalid_argument);
  REQUIRE_THROWS_AS(make_product_graph({path_graph(3), path_graph(4)}), std::invalid_argument);
}

TEST_CASE("closed neighborhoods", "[mmspace]") {
  const FiniteMMSpace x = make_cube(2, 2);
  const std::vector<std::size_t> origin{0};
  REQUIRE(x.closed_neighborhood(origin, 0.0) == origin);
  REQUIRE(x.closed_neighborhood(origin, 1.0).size() == 3);
  std::vector<std::size_t> all_points;
  for (std::size_t i = 0; i < x.size(); ++i) all_points.push_back(i);
  REQUIRE(x.closed_neighborhood(all_points, 0.5) == all_points);
  REQUIRE_THROWS_AS(x.closed_neighborhood({}, 1.0), std::invalid_argument);
}

TEST_CASE("distance pushforward matches convolution on cubes", "[mmspace]") {
  const AtomicMeasure one = make_cube(2, 1).distance_pushforward(0);
  REQUIRE(one.atoms() == std::vector<double>{0.0, 1.0});
  REQUIRE(one.weights()[0] == Catch::Approx(0.5));

  const AtomicMeasure two = make_cube(2, 2).distance_pushforward(0);
  REQUIRE(two.weights()[1] == Catch::Approx(0.5));

  const AtomicMeasure torus = make_torus(4, 1).distance_pushforward(0);
  REQUIRE(torus.atoms() == std::vector<double>{0.0, 1.0, 2.0});
  REQUIRE(torus.weights()[1] == Catch::Approx(0.5));

  // the independent-coordinate identity: pushforward = n-fold convolution
  for (int k : {2, 3}) {
    for (int n : {1, 2, 3}) {
      if (std::pow(k, n) > 64) continue;
      const AtomicMeasure pushed = make_cube(k, n).distance_pushforward(0);
      std::vector<double> base_atoms;
      for (int v = 0; v < k; ++v) base_atoms.push_back(v);
      AtomicMeasure conv = AtomicMeasure::uniform(base_atoms);
      for (int i = 1; i < n; ++i) conv = convolve(conv, AtomicMeasure::uniform(base_atoms));
      REQUIRE(pushed.size() == conv.size());
      for (std::size_t i = 0; i < conv.size(); ++i) {
        REQUIRE(pushed.atoms()[i] == Catch::Approx(conv.atoms()[i]).margin(1e-12));
        REQUIRE(pushed.weights()[i] == Catch::Approx(conv.weights()[i]).margin(1e-12));
      }
    }
  }
}

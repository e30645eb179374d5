#include <catch2/catch_amalgamated.hpp>

#include "isolip/experiments.hpp"

using namespace isolip;

TEST_CASE("variance normalization", "[experiments]") {
  REQUIRE(epsilon_k_n(2, 1) == Catch::Approx(2.0));
  REQUIRE(epsilon_k_n(3, 3) == Catch::Approx(std::sqrt(0.5)));
  for (int k : {2, 3, 5}) {
    for (int n : {1, 4, 64}) {
      const double eps = epsilon_k_n(k, n);
      REQUIRE(eps * eps * n * (k * k - 1) / 12.0 == Catch::Approx(1.0).margin(1e-12));
    }
  }
}

TEST_CASE("gaussian grid discretization", "[experiments]") {
  const AtomicMeasure g = gaussian_grid();
  REQUIRE(g.size() == 2401);
  REQUIRE(g.is_probability());
  REQUIRE(g.cdf(0.0) == Catch::Approx(0.5).margin(1e-3));
  REQUIRE(g.cdf(1.0) == Catch::Approx(0.8413).margin(1e-3));
  REQUIRE(g.mean() == Catch::Approx(0.0).margin(1e-12));
  // central interval of mass 1/2 has endpoints near the quartiles
  REQUIRE(g.partial_diameter(0.5) == Catch::Approx(2.0 * 0.6745).margin(0.02));
}

TEST_CASE("normal law rows", "[experiments]") {
  NormalLawConfig cfg;
  cfg.n_list = {1, 4, 16};
  const auto result = run_normal_law(cfg);
  REQUIRE(result.rows.size() == 3);
  REQUIRE(result.centered);

  // n = 1: uniform on +-1 after centering (eps_{2,1} = 2)
  REQUIRE(result.rows[0].eps == Catch::Approx(2.0));
  REQUIRE(result.rows[1].prohorov_to_gauss <= result.rows[0].prohorov_to_gauss + 1e-9);
  REQUIRE(result.rows[2].prohorov_to_gauss <= result.rows[1].prohorov_to_gauss + 1e-9);
  REQUIRE(result.trend_ok);
}

TEST_CASE("partial diameters converge weakly to the gaussian ones", "[experiments]") {
  const AtomicMeasure g = gaussian_grid();
  std::vector<double> base{0.0, 1.0};
  for (double kappa : {0.25, 0.5}) {
    double prev_gap = 10.0;
    for (int n : {16, 64}) {
      AtomicMeasure nu = AtomicMeasure::uniform(base);
      for (int i = 1; i < n; ++i) nu = convolve(nu, AtomicMeasure::uniform(base));
      nu = scale_shift(nu, epsilon_k_n(2, n), 0.0);
      nu = scale_shift(nu, 1.0, -nu.mean());
      const double gap =
          std::abs(nu.partial_diameter(1.0 - kappa) - g.partial_diameter(1.0 - kappa));
      REQUIRE(gap <= prev_gap + 1e-9);
      REQUIRE(gap <= 4.0 / std::sqrt(n) + 0.05);
      prev_gap = gap;
    }
  }
}

TEST_CASE("cube stability rows", "[experiments]") {
  CubeStabilityConfig cfg;
  cfg.k_list = {2, 4};
  cfg.mcshane_fields = 4;
  const auto result = run_cube_stability(cfg);
  REQUIRE(result.rows.size() == 2);
  for (const auto& row : result.rows) {
    REQUIRE(row.dominance_pass);
    REQUIRE(row.min_s_distance_family <= row.target_s + 1e-9);
    REQUIRE(row.gap_ok);
  }
  REQUIRE(result.pass);
}

TEST_CASE("torus rows", "[experiments]") {
  TorusConfig cfg;
  cfg.k_list = {2, 4};
  cfg.mcshane_fields = 4;
  const auto result = run_torus(cfg);
  REQUIRE(result.rows.size() == 2);
  for (const auto& row : result.rows) {
    REQUIRE(row.icl_ran);
    REQUIRE(row.icl_pass);
    REQUIRE(row.dominance_pass);
  }
  REQUIRE(result.pass);
  REQUIRE_THROWS_AS(run_torus([] {
                      TorusConfig bad;
                      bad.k_list = {3};
                      return bad;
                    }()),
                    std::invalid_argument);
}

TEST_CASE("observable diameter chain", "[experiments]") {
  ObsDiamChainConfig cfg;
  cfg.k = 2;
  cfg.n = 2;
  cfg.kappa_list = {0.25, 1.0};
  cfg.mcshane_fields = 8;
  const auto result = run_obsdiam_chain(cfg);
  REQUIRE(result.pass);
  REQUIRE(result.rows.back().diam_nu == 0.0);  // kappa = 1 collapses everything
  REQUIRE(result.rows.back().lower_cube == 0.0);
}

TEST_CASE("experiment outputs are deterministic", "[experiments]") {
  NormalLawConfig nl;
  nl.n_list = {1, 4};
  REQUIRE(normal_law_csv(run_normal_law(nl)) == normal_law_csv(run_normal_law(nl)));

  CubeStabilityConfig cs;
  cs.k_list = {2};
  cs.mcshane_fields = 3;
  REQUIRE(cube_stability_csv(run_cube_stability(cs)) ==
          cube_stability_csv(run_cube_stability(cs)));

  ObsDiamChainConfig oc;
  oc.n = 2;
  oc.mcshane_fields = 4;
  REQUIRE(obsdiam_chain_csv(run_obsdiam_chain(oc)) ==
          obsdiam_chain_csv(run_obsdiam_chain(oc)));
}

#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "isolip/common.hpp"
#include "isolip/isoorder.hpp"
#include "isolip/isoperim.hpp"
#include "isolip/lipschitz.hpp"
#include "isolip/measure.hpp"
#include "isolip/mmspace.hpp"
#include "isolip/prohorov.hpp"

namespace isolip {

/// %.17g rendering used for every number that lands in an output file, so
/// reruns are byte-identical.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// The normalization sqrt(12 / ((k^2 - 1) n)) that gives the scaled
/// distance-from-origin pushforward unit variance.
inline double epsilon_k_n(int k, int n) {
  return std::sqrt(12.0 / ((static_cast<double>(k) * k - 1.0) * n));
}

struct GaussianGridSpec {
  double half_width = 6.0;
  std::size_t atoms = 2401;
};

/// Standard normal law discretized on a uniform grid over
/// [-half_width, half_width]; tail mass beyond the grid is folded into the
/// end atoms (below 2e-9 at six sigma, far under reported tolerances).
inline AtomicMeasure gaussian_grid(const GaussianGridSpec& spec = {}) {
  if (spec.atoms < 2) throw std::invalid_argument("gaussian_grid: need at least two atoms");
  if (!(spec.half_width > 0.0))
    throw std::invalid_argument("gaussian_grid: half_width must be positive");
  const double w = spec.half_width;
  const std::size_t m = spec.atoms;
  const double h = 2.0 * w / static_cast<double>(m - 1);
  auto phi = [](double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); };
  std::vector<double> atoms(m), weights(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = -w + static_cast<double>(i) * h;
    atoms[i] = t;
    if (i == 0)
      weights[i] = phi(t + h / 2.0);
    else if (i == m - 1)
      weights[i] = 1.0 - phi(t - h / 2.0);
    else
      weights[i] = phi(t + h / 2.0) - phi(t - h / 2.0);
  }
  return AtomicMeasure(std::move(atoms), std::move(weights));
}

/// Distance functions from every point, plus seeded McShane fields. The
/// standard sampled stand-in for the (infinite) 1-measurement.
inline std::vector<ScalarField> standard_family(const FiniteMMSpace& x,
                                                std::size_t mcshane_fields,
                                                std::uint64_t seed) {
  std::vector<ScalarField> family;
  family.reserve(x.size() + mcshane_fields);
  for (std::size_t p = 0; p < x.size(); ++p) family.push_back(distance_field(x, p));
  for (std::size_t i = 0; i < mcshane_fields; ++i)
    family.push_back(mcshane_random(x, 1 + i % 4, seed + i));
  return family;
}

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// --------------------------------------------------------------------------
// normal-law: convergence of centered scaled cube pushforwards to the
// Gaussian grid in Prohorov distance.
// --------------------------------------------------------------------------

struct NormalLawConfig {
  int k = 2;
  std::vector<int> n_list{4, 16, 64, 256};
  GaussianGridSpec grid;
};

struct ConvergenceRow {
  int n = 0;
  int k = 0;
  double eps = 0.0;               // epsilon_{k,n}
  double prohorov_to_gauss = 0.0; // d_P(centered nu_{k,n}, gaussian grid)
  double cert_min_s = 0.0;        // greedy quantile certificate at t = d_P + 1e-9
  double cert_t = 0.0;
  double runtime_seconds = 0.0;   // console metadata; never written to output files
};

struct NormalLawResult {
  std::vector<ConvergenceRow> rows;
  bool trend_ok = false;  // distances non-increasing along n_list
  bool centered = true;   // nu is translated by -mean before comparison
};

/// For each n builds nu_{k,n} = (eps_{k,n} d_0)_* m_{[k]^n} by n-fold
/// convolution, recenters it by its mean (the convergence statement is read
/// modulo translation; the uncentered mean diverges), and measures the
/// Prohorov distance to the Gaussian grid.
inline NormalLawResult run_normal_law(const NormalLawConfig& cfg) {
  if (cfg.k < 2) throw std::invalid_argument("run_normal_law: k must be at least 2");
  const AtomicMeasure gauss = gaussian_grid(cfg.grid);
  std::vector<double> base_atoms(static_cast<std::size_t>(cfg.k));
  for (int v = 0; v < cfg.k; ++v) base_atoms[static_cast<std::size_t>(v)] = v;
  const AtomicMeasure base = AtomicMeasure::uniform(base_atoms);

  NormalLawResult result;
  auto rows = parallel_map<ConvergenceRow>(cfg.n_list.size(), [&](std::size_t idx) {
    const int n = cfg.n_list[idx];
    if (n < 1) throw std::invalid_argument("run_normal_law: n must be positive");
    // the n-fold convolution of uniform{0..k-1} has n(k-1)+1 atoms
    if (static_cast<double>(n) * (cfg.k - 1) + 1 > 1e6)
      throw budget_error("run_normal_law: convolution support exceeds 1e6 atoms");
    detail::Stopwatch clock;
    AtomicMeasure nu = base;
    for (int i = 1; i < n; ++i) nu = convolve(nu, base);
    const double eps = epsilon_k_n(cfg.k, n);
    nu = scale_shift(nu, eps, 0.0);
    nu = scale_shift(nu, 1.0, -nu.mean());
    ConvergenceRow row;
    row.n = n;
    row.k = cfg.k;
    row.eps = eps;
    row.prohorov_to_gauss = prohorov(gauss, nu);
    row.cert_t = row.prohorov_to_gauss + 1e-9;
    row.cert_min_s = greedy_cert_min_s(gauss, nu, row.cert_t);
    row.runtime_seconds = clock.seconds();
    return row;
  });
  result.rows = std::move(rows);
  result.trend_ok = true;
  for (std::size_t i = 0; i + 1 < result.rows.size(); ++i)
    if (result.rows[i + 1].prohorov_to_gauss > result.rows[i].prohorov_to_gauss + 1e-9)
      result.trend_ok = false;
  return result;
}

// --------------------------------------------------------------------------
// cube-stability / torus: scaled grids, 1/k-iso-dominance certificates, and
// the discretization Prohorov bound.
// --------------------------------------------------------------------------

struct CubeStabilityConfig {
  std::vector<int> k_list{2, 4, 8, 16};
  int n = 1;
  std::size_t mcshane_fields = 8;
  std::uint64_t seed = 1;
  DecideOptions decide;
  std::size_t space_budget = kDefaultSpaceBudget;
};

struct CubeStabilityRow {
  int k = 0;
  double target_s = 0.0;  // 1/k
  bool dominance_pass = false;
  double min_s_distance_family = 0.0;
  double prohorov_gap_to_refined = 0.0;  // d_P(nu_k, nu_2k)
  double gap_bound = 0.0;                // n/k + n/(2k), the discretization chain bound
  bool gap_ok = false;
  double runtime_seconds = 0.0;          // console metadata only
};

struct CubeStabilityResult {
  std::vector<CubeStabilityRow> rows;
  bool trend_ok = false;  // min_s non-increasing along k_list
  bool pass = false;
};

/// For each k: builds (1/k)[k]^n and nu_k = (d_0/k)-pushforward, certifies
/// nu_k as a 1/k-iso-dominant over the distance + McShane family, computes
/// the exact min_s envelope over the distance family, and verifies the
/// Prohorov gap to the 2k-refinement against the n/k discretization bound.
inline CubeStabilityResult run_cube_stability(const CubeStabilityConfig& cfg) {
  CubeStabilityResult result;
  auto rows = parallel_map<CubeStabilityRow>(cfg.k_list.size(), [&](std::size_t idx) {
    const int k = cfg.k_list[idx];
    detail::Stopwatch clock;
    CubeStabilityRow row;
    row.k = k;
    row.target_s = 1.0 / k;
    const FiniteMMSpace x = make_cube(k, cfg.n, 1.0 / k, cfg.space_budget);
    const AtomicMeasure nu = x.distance_pushforward(0);
    const auto family = standard_family(x, cfg.mcshane_fields, cfg.seed + 97 * idx);
    row.dominance_pass = check_iso_dominant(nu, x, row.target_s, family, cfg.decide).all_pass;
    double worst = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) {
      const AtomicMeasure pushed = pushforward_field(x, distance_field(x, p));
      worst = std::max(worst, min_s_at_t(nu, pushed, 0.0, cfg.decide));
    }
    row.min_s_distance_family = worst;
    const FiniteMMSpace x2 = make_cube(2 * k, cfg.n, 1.0 / (2 * k), cfg.space_budget);
    row.prohorov_gap_to_refined = prohorov(nu, x2.distance_pushforward(0));
    row.gap_bound = static_cast<double>(cfg.n) / k + static_cast<double>(cfg.n) / (2.0 * k);
    row.gap_ok = row.prohorov_gap_to_refined <= row.gap_bound + 1e-9;
    row.runtime_seconds = clock.seconds();
    return row;
  });
  result.rows = std::move(rows);
  result.trend_ok = true;
  for (std::size_t i = 0; i + 1 < result.rows.size(); ++i)
    if (result.rows[i + 1].min_s_distance_family >
        result.rows[i].min_s_distance_family + 1e-9)
      result.trend_ok = false;
  result.pass = result.trend_ok;
  for (const auto& r : result.rows)
    result.pass = result.pass && r.dominance_pass && r.gap_ok &&
                  r.min_s_distance_family <= r.target_s + 1e-9;
  return result;
}

struct TorusConfig {
  std::vector<int> k_list{2, 4};
  int n = 1;
  std::size_t mcshane_fields = 8;
  std::uint64_t seed = 1;
  DecideOptions decide;
  std::size_t space_budget = kDefaultSpaceBudget;
  std::size_t icl_point_limit = 12;  // exhaustive ICL only for spaces this small
};

struct TorusRow {
  int k = 0;
  double target_s = 0.0;
  bool icl_ran = false;
  bool icl_pass = false;  // exhaustive ICL((d_0)_* m) on the unscaled torus
  bool dominance_pass = false;
  double min_s_distance_family = 0.0;
  double runtime_seconds = 0.0;  // console metadata only
};

struct TorusResult {
  std::vector<TorusRow> rows;
  bool pass = false;
};

/// The cube-stability pipeline on discrete tori, plus the exhaustive ICL
/// check on tiny unscaled instances.
inline TorusResult run_torus(const TorusConfig& cfg) {
  TorusResult result;
  auto rows = parallel_map<TorusRow>(cfg.k_list.size(), [&](std::size_t idx) {
    const int k = cfg.k_list[idx];
    detail::Stopwatch clock;
    TorusRow row;
    row.k = k;
    row.target_s = 1.0 / k;
    const FiniteMMSpace x0 = make_torus(k, cfg.n, cfg.space_budget);
    if (x0.size() <= cfg.icl_point_limit) {
      row.icl_ran = true;
      row.icl_pass = check_icl(x0, x0.distance_pushforward(0), 0.0).pass;
    }
    const FiniteMMSpace x = x0.scaled(1.0 / k);
    const AtomicMeasure nu = x.distance_pushforward(0);
    const auto family = standard_family(x, cfg.mcshane_fields, cfg.seed + 131 * idx);
    row.dominance_pass = check_iso_dominant(nu, x, row.target_s, family, cfg.decide).all_pass;
    double worst = 0.0;
    for (std::size_t p = 0; p < x.size(); ++p) {
      const AtomicMeasure pushed = pushforward_field(x, distance_field(x, p));
      worst = std::max(worst, min_s_at_t(nu, pushed, 0.0, cfg.decide));
    }
    row.min_s_distance_family = worst;
    row.runtime_seconds = clock.seconds();
    return row;
  });
  result.rows = std::move(rows);
  result.pass = true;
  for (const auto& r : result.rows)
    result.pass = result.pass && (!r.icl_ran || r.icl_pass) && r.dominance_pass &&
                  r.min_s_distance_family <= r.target_s + 1e-9;
  return result;
}

// --------------------------------------------------------------------------
// obsdiam-chain: the observable-diameter comparison chain on scaled product
// graphs, checked one-sidedly with sampled lower bounds.
// --------------------------------------------------------------------------

struct ObsDiamChainConfig {
  int k = 2;
  int n = 3;
  std::vector<Graph> factors;  // empty: n copies of the complete graph K_k
  std::vector<double> kappa_list{0.1, 0.25, 0.5};
  std::size_t mcshane_fields = 32;
  std::uint64_t seed = 1;
  std::size_t space_budget = kDefaultSpaceBudget;
};

struct ObsDiamChainRow {
  double kappa = 0.0;
  double diam_nu = 0.0;        // diam(nu_{k,n}; 1 - kappa), exact
  double lower_product = 0.0;  // sampled lower bound for ObsDiam(eps * prod G_i; -kappa)
  double lower_cube = 0.0;     // sampled lower bound for ObsDiam(eps [k]^n; -kappa)
  bool ineq1 = false;          // lower_product <= diam_nu + eps
  bool ineq2 = false;          // diam_nu <= lower_cube   (d_0 is in the family)
  bool ineq3 = false;          // lower_cube <= diam_nu + eps
};

struct ObsDiamChainResult {
  double eps = 0.0;
  std::vector<ObsDiamChainRow> rows;
  bool pass = false;
};

/// Checks the chain ObsDiam(eps prod G_i; -kappa) <= diam(nu;1-kappa)+eps
/// <= ObsDiam(eps [k]^n; -kappa)+eps <= diam(nu;1-kappa)+2eps with sampled
/// lower bounds in place of the sups (a sound one-sided check; the middle
/// link holds because the cube family contains d_0 itself).
inline ObsDiamChainResult run_obsdiam_chain(const ObsDiamChainConfig& cfg) {
  const double eps = epsilon_k_n(cfg.k, cfg.n);
  std::vector<Graph> factors = cfg.factors;
  if (factors.empty()) factors.assign(static_cast<std::size_t>(cfg.n), complete_graph(cfg.k));
  if (factors.size() != static_cast<std::size_t>(cfg.n))
    throw std::invalid_argument("run_obsdiam_chain: factor count must equal n");
  for (const auto& g : factors)
    if (g.order != cfg.k)
      throw std::invalid_argument("run_obsdiam_chain: factor order must equal k");

  const FiniteMMSpace cube = make_cube(cfg.k, cfg.n, eps, cfg.space_budget);
  const FiniteMMSpace product = make_product_graph(factors, cfg.space_budget).scaled(eps);
  const AtomicMeasure nu = cube.distance_pushforward(0);
  const auto fam_cube = standard_family(cube, cfg.mcshane_fields, cfg.seed);
  const auto fam_prod = standard_family(product, cfg.mcshane_fields, cfg.seed + 5000);

  ObsDiamChainResult result;
  result.eps = eps;
  for (double kappa : cfg.kappa_list) {
    ObsDiamChainRow row;
    row.kappa = kappa;
    row.diam_nu = nu.partial_diameter(std::min(1.0, std::max(0.0, 1.0 - kappa)));
    row.lower_product = obs_diameter_lower(product, kappa, fam_prod);
    row.lower_cube = obs_diameter_lower(cube, kappa, fam_cube);
    row.ineq1 = row.lower_product <= row.diam_nu + eps + 1e-9;
    row.ineq2 = row.diam_nu <= row.lower_cube + 1e-9;
    row.ineq3 = row.lower_cube <= row.diam_nu + eps + 1e-9;
    result.rows.push_back(row);
  }
  result.pass = true;
  for (const auto& r : result.rows)
    result.pass = result.pass && r.ineq1 && r.ineq2 && r.ineq3;
  return result;
}

// --------------------------------------------------------------------------
// CSV emitters. Columns are fixed and versioned; runtimes stay out of the
// files so reruns are byte-identical.
// --------------------------------------------------------------------------

inline std::string normal_law_csv(const NormalLawResult& r) {
  std::string out = "# isolip normal-law csv v1\nn,k,eps,prohorov_to_gauss,cert_min_s,cert_t\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.n) + "," + std::to_string(row.k) + "," + fmt_double(row.eps) +
           "," + fmt_double(row.prohorov_to_gauss) + "," + fmt_double(row.cert_min_s) + "," +
           fmt_double(row.cert_t) + "\n";
  }
  out += "# trend_ok=" + std::string(r.trend_ok ? "true" : "false") + " centered=true\n";
  return out;
}

inline std::string cube_stability_csv(const CubeStabilityResult& r) {
  std::string out =
      "# isolip cube-stability csv v1\n"
      "k,target_s,dominance_pass,min_s_distance_family,prohorov_gap_to_refined,gap_bound,"
      "gap_ok\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.k) + "," + fmt_double(row.target_s) + "," +
           (row.dominance_pass ? "true" : "false") + "," +
           fmt_double(row.min_s_distance_family) + "," +
           fmt_double(row.prohorov_gap_to_refined) + "," + fmt_double(row.gap_bound) + "," +
           (row.gap_ok ? "true" : "false") + "\n";
  }
  out += "# trend_ok=" + std::string(r.trend_ok ? "true" : "false") +
         " pass=" + (r.pass ? "true" : "false") + "\n";
  return out;
}

inline std::string torus_csv(const TorusResult& r) {
  std::string out =
      "# isolip torus csv v1\n"
      "k,target_s,icl_ran,icl_pass,dominance_pass,min_s_distance_family\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.k) + "," + fmt_double(row.target_s) + "," +
           (row.icl_ran ? "true" : "false") + "," + (row.icl_pass ? "true" : "false") + "," +
           (row.dominance_pass ? "true" : "false") + "," +
           fmt_double(row.min_s_distance_family) + "\n";
  }
  out += "# pass=" + std::string(r.pass ? "true" : "false") + "\n";
  return out;
}

inline std::string obsdiam_chain_csv(const ObsDiamChainResult& r) {
  std::string out =
      "# isolip obsdiam-chain csv v1\n"
      "kappa,eps,diam_nu,lower_product,lower_cube,ineq1,ineq2,ineq3\n";
  for (const auto& row : r.rows) {
    out += fmt_double(row.kappa) + "," + fmt_double(r.eps) + "," + fmt_double(row.diam_nu) +
           "," + fmt_double(row.lower_product) + "," + fmt_double(row.lower_cube) + "," +
           (row.ineq1 ? "true" : "false") + "," + (row.ineq2 ? "true" : "false") + "," +
           (row.ineq3 ? "true" : "false") + "\n";
  }
  out += "# pass=" + std::string(r.pass ? "true" : "false") + "\n";
  return out;
}

}  // namespace isolip

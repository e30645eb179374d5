#pragma once

// Test-only oracles, kept independent of the library's computation paths:
// brute-force enumerations, the min-cut dual for transportation mass, and
// random-instance generators with clean dyadic weights.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "isolip/common.hpp"
#include "isolip/measure.hpp"
#include "isolip/pairset.hpp"

namespace oracle {

/// Random probability measure with up to max_atoms atoms, integer-ish
/// positions and weights that are multiples of 1/64 (exact in doubles).
inline isolip::AtomicMeasure random_measure(isolip::Rng& rng, std::size_t max_atoms) {
  const std::size_t n = 1 + rng.uniform_index(max_atoms);
  std::vector<double> atoms;
  double pos = std::floor(rng.uniform(-8.0, 8.0) * 4.0) / 4.0;
  for (std::size_t i = 0; i < n; ++i) {
    atoms.push_back(pos);
    pos += 0.25 + std::floor(rng.uniform(0.0, 12.0)) * 0.25;
  }
  // split 64 grains across the atoms, at least one each
  std::vector<int> grains(n, 1);
  for (int g = static_cast<int>(n); g < 64; ++g) ++grains[rng.uniform_index(n)];
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = grains[i] / 64.0;
  return isolip::AtomicMeasure(atoms, weights);
}

inline isolip::PairSet random_pairset(isolip::Rng& rng, std::size_t max_points) {
  const std::size_t n = 1 + rng.uniform_index(max_points);
  std::vector<isolip::PairSet::Point> pts;
  for (std::size_t i = 0; i < n; ++i)
    pts.emplace_back(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
  return isolip::PairSet(std::move(pts));
}

/// Sliding-window oracle for the partial diameter: direct minimum over all
/// atom-endpoint windows.
inline double partial_diameter_oracle(const isolip::AtomicMeasure& mu, double alpha) {
  if (alpha <= 1e-12) return 0.0;
  const auto& a = mu.atoms();
  const auto& c = mu.cumulative();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i; j < a.size(); ++j) {
      const double mass = c[j] - (i > 0 ? c[i - 1] : 0.0);
      if (mass >= alpha - 1e-12) best = std::min(best, a[j] - a[i]);
    }
  return std::isfinite(best) ? best : 0.0;
}

/// Transportation max-mass by LP duality: the maximum coupling mass on the
/// allowed cells equals the minimum over row/column covers of the covered
/// capacity (max-flow = min-cut, and cuts here are integral covers). Row
/// subsets are enumerated directly, so this is exact for small supports.
inline double max_mass_oracle(const std::vector<double>& row_caps,
                              const std::vector<double>& col_caps,
                              const std::vector<std::vector<bool>>& allowed) {
  const std::size_t m = row_caps.size(), n = col_caps.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t pick = 0; pick < (std::size_t{1} << m); ++pick) {
    double cost = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if ((pick >> i) & 1u) cost += row_caps[i];
    for (std::size_t j = 0; j < n; ++j) {
      bool needed = false;
      for (std::size_t i = 0; i < m; ++i)
        if (!((pick >> i) & 1u) && allowed[i][j]) needed = true;
      if (needed) cost += col_caps[j];
    }
    best = std::min(best, cost);
  }
  return best;
}

/// Prohorov oracle via the dual transportation bound: scans every candidate
/// threshold (cell distance) and mass deficit.
inline double prohorov_oracle(const isolip::AtomicMeasure& mu, const isolip::AtomicMeasure& nu) {
  const std::size_t m = mu.size(), n = nu.size();
  std::vector<double> dists{0.0};
  for (double a : mu.atoms())
    for (double b : nu.atoms()) dists.push_back(std::abs(a - b));
  std::sort(dists.begin(), dists.end());
  dists.erase(std::unique(dists.begin(), dists.end()), dists.end());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < dists.size(); ++idx) {
    const double d = dists[idx];
    std::vector<std::vector<bool>> allowed(m, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        allowed[i][j] = std::abs(mu.atoms()[i] - nu.atoms()[j]) <= d;
    const double mass = max_mass_oracle(mu.weights(), nu.weights(), allowed);
    const double candidate = std::max(d, 1.0 - mass);
    const double next = idx + 1 < dists.size() ? dists[idx + 1]
                                               : std::numeric_limits<double>::infinity();
    if (candidate < next) best = std::min(best, candidate);
  }
  return best;
}

}  // namespace oracle

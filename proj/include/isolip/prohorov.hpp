#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "isolip/maxflow.hpp"
#include "isolip/measure.hpp"
#include "isolip/plan.hpp"

namespace isolip {

namespace detail {

/// Max coupling mass placeable on cells with |x - y| <= d.
inline TransportMax prohorov_feasible_mass(const AtomicMeasure& mu, const AtomicMeasure& nu,
                                           double d) {
  std::vector<std::pair<std::size_t, std::size_t>> allowed;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j)
      if (std::abs(mu.atoms()[i] - nu.atoms()[j]) <= d) allowed.emplace_back(i, j);
  return max_mass_on_cells(mu.weights(), nu.weights(), allowed);
}

}  // namespace detail

struct ProhorovResult {
  double distance = 0.0;
  Plan plan;  // a coupling with mass >= 1 - distance within `distance` of the diagonal
};

/// Prohorov distance between two finitely-supported probability measures,
/// computed through the coupling characterization: the least eps such that
/// some coupling puts mass >= 1 - eps on cells within eps of the diagonal.
///
/// The feasible-mass function M(d) is a step function of the threshold d,
/// constant between consecutive cell distances, so the optimum equals
/// max(d_i, 1 - M(d_i)) at the first cell distance d_i where that value
/// stays below the next distance. Binary search over the sorted distances
/// makes the result exact; each probe solves one transportation max-flow.
inline ProhorovResult prohorov_with_plan(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (!mu.is_probability() || !nu.is_probability())
    throw std::invalid_argument("prohorov: requires probability measures");
  std::vector<double> dists;
  dists.reserve(mu.size() * nu.size() + 1);
  dists.push_back(0.0);
  for (double a : mu.atoms())
    for (double b : nu.atoms()) dists.push_back(std::abs(a - b));
  std::sort(dists.begin(), dists.end());
  dists.erase(std::unique(dists.begin(), dists.end()), dists.end());

  const double inf = std::numeric_limits<double>::infinity();
  auto next_dist = [&](std::size_t i) { return i + 1 < dists.size() ? dists[i + 1] : inf; };
  // P(i): the interval [d_i, d_{i+1}) contains a feasible eps. Monotone in i.
  auto pred = [&](std::size_t i) {
    return 1.0 - detail::prohorov_feasible_mass(mu, nu, dists[i]).mass < next_dist(i);
  };
  std::size_t lo = 0, hi = dists.size() - 1;  // pred(last) always holds: M = 1 there
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  TransportMax best = detail::prohorov_feasible_mass(mu, nu, dists[lo]);
  ProhorovResult out{std::max(dists[lo], 1.0 - best.mass),
                     Plan(mu.atoms(), nu.atoms(),
                          complete_to_coupling(mu.weights(), nu.weights(), best.cells))};
  return out;
}

inline double prohorov(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  return prohorov_with_plan(mu, nu).distance;
}

}  // namespace isolip

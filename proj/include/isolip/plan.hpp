#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isolip/common.hpp"
#include "isolip/measure.hpp"
#include "isolip/pairset.hpp"

namespace isolip {

struct PlanCell {
  std::size_t row = 0;
  std::size_t col = 0;
  double mass = 0.0;
};

/// A (sub)transport plan between two atomic measures, stored as positive
/// cells on the support grid (row atoms x column atoms). Cells are kept
/// sorted by (row, col); duplicates merge on construction.
class Plan {
 public:
  Plan(std::vector<double> row_atoms, std::vector<double> col_atoms, std::vector<PlanCell> cells)
      : row_atoms_(std::move(row_atoms)), col_atoms_(std::move(col_atoms)) {
    std::sort(cells.begin(), cells.end(), [](const PlanCell& a, const PlanCell& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (const auto& c : cells) {
      if (c.row >= row_atoms_.size() || c.col >= col_atoms_.size())
        throw std::invalid_argument("Plan: cell index out of range");
      if (c.mass < 0.0) throw std::invalid_argument("Plan: negative cell mass");
      if (c.mass == 0.0) continue;
      if (!cells_.empty() && cells_.back().row == c.row && cells_.back().col == c.col)
        cells_.back().mass += c.mass;
      else
        cells_.push_back(c);
    }
  }

  const std::vector<double>& row_atoms() const { return row_atoms_; }
  const std::vector<double>& col_atoms() const { return col_atoms_; }
  const std::vector<PlanCell>& cells() const { return cells_; }

  double total_mass() const {
    double m = 0.0;
    for (const auto& c : cells_) m += c.mass;
    return m;
  }

  std::vector<double> row_sums() const {
    std::vector<double> r(row_atoms_.size(), 0.0);
    for (const auto& c : cells_) r[c.row] += c.mass;
    return r;
  }

  std::vector<double> col_sums() const {
    std::vector<double> r(col_atoms_.size(), 0.0);
    for (const auto& c : cells_) r[c.col] += c.mass;
    return r;
  }

  /// Support of the plan as a point set in the plane.
  PairSet support() const {
    std::vector<PairSet::Point> pts;
    pts.reserve(cells_.size());
    for (const auto& c : cells_) pts.emplace_back(row_atoms_[c.row], col_atoms_[c.col]);
    return PairSet(std::move(pts));
  }

  /// Keeps only the given grid cells (zeroing the rest); used to restrict a
  /// certificate plan to its selected set before composing.
  Plan restricted_to(const std::vector<std::pair<std::size_t, std::size_t>>& keep) const {
    std::vector<PlanCell> kept;
    for (const auto& c : cells_)
      for (const auto& [i, j] : keep)
        if (c.row == i && c.col == j) {
          kept.push_back(c);
          break;
        }
    return Plan(row_atoms_, col_atoms_, std::move(kept));
  }

 private:
  std::vector<double> row_atoms_;
  std::vector<double> col_atoms_;
  std::vector<PlanCell> cells_;
};

/// True when the plan's marginals equal the two measures within kPlanTol.
inline bool is_transport_plan(const Plan& p, const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (p.row_atoms() != mu.atoms() || p.col_atoms() != nu.atoms()) return false;
  auto rs = p.row_sums();
  auto cs = p.col_sums();
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (std::abs(rs[i] - mu.weights()[i]) > kPlanTol) return false;
  for (std::size_t j = 0; j < cs.size(); ++j)
    if (std::abs(cs[j] - nu.weights()[j]) > kPlanTol) return false;
  return true;
}

/// True when the plan's marginals are dominated by the two measures.
inline bool is_subtransport_plan(const Plan& p, const AtomicMeasure& mu,
                                 const AtomicMeasure& nu) {
  if (p.row_atoms() != mu.atoms() || p.col_atoms() != nu.atoms()) return false;
  auto rs = p.row_sums();
  auto cs = p.col_sums();
  for (std::size_t i = 0; i < rs.size(); ++i)
    if (rs[i] > mu.weights()[i] + kPlanTol) return false;
  for (std::size_t j = 0; j < cs.size(); ++j)
    if (cs[j] > nu.weights()[j] + kPlanTol) return false;
  return true;
}

/// The comonotone (quantile) coupling, built by merging the cumulative
/// weight sequences of the two measures. Its support is a staircase: rows
/// and columns are non-decreasing along the merge.
inline Plan quantile_coupling(const AtomicMeasure& mu, const AtomicMeasure& nu) {
  if (!mu.is_probability() || !nu.is_probability())
    throw std::invalid_argument("quantile_coupling: requires probability measures");
  const auto& ca = mu.cumulative();
  const auto& cb = nu.cumulative();
  std::vector<PlanCell> cells;
  cells.reserve(mu.size() + nu.size());
  std::size_t i = 0, j = 0;
  double u = 0.0;
  while (i < ca.size() && j < cb.size()) {
    const double next = std::min(ca[i], cb[j]);
    const double w = next - u;
    if (w > 1e-15) cells.push_back({i, j, w});
    u = next;
    // advance every sequence whose boundary is reached (ties advance both)
    if (ca[i] <= u + 1e-15) ++i;
    if (cb[j] <= u + 1e-15) ++j;
  }
  return Plan(mu.atoms(), nu.atoms(), std::move(cells));
}

/// Distortion from the diagonal of a transport plan: the exact value of
/// inf_S max(dis_delta S, 1 - pi(S)). The infimum is attained on a distance
/// sublevel set of the cells, so a sweep over cell distances is exact.
inline double dis_delta(const Plan& pi) {
  if (std::abs(pi.total_mass() - 1.0) > kPlanTol)
    throw std::invalid_argument("dis_delta: requires a transport plan (total mass 1)");
  std::vector<std::pair<double, double>> by_dist;  // (|x-y|, mass)
  by_dist.reserve(pi.cells().size());
  for (const auto& c : pi.cells())
    by_dist.emplace_back(std::abs(pi.row_atoms()[c.row] - pi.col_atoms()[c.col]), c.mass);
  std::sort(by_dist.begin(), by_dist.end());
  double best = 1.0;  // S = empty set
  double inside = 0.0;
  std::size_t k = 0;
  while (k < by_dist.size()) {
    const double d = by_dist[k].first;
    while (k < by_dist.size() && by_dist[k].first == d) inside += by_dist[k++].second;
    best = std::min(best, std::max(d, 1.0 - inside));
  }
  return best;
}

/// Composes two subtransport plans through their shared middle measure by
/// discrete disintegration: conditional rows and columns at each middle atom
/// are combined with weight min(mass under the two marginals). The result is
/// a subtransport plan with total mass at least mass(p1) + mass(p2) - 1.
inline Plan compose_subtransport(const Plan& p1, const Plan& p2) {
  const auto& mid1 = p1.col_atoms();
  const auto& mid2 = p2.row_atoms();
  if (mid1.size() != mid2.size())
    throw std::invalid_argument("compose_subtransport: incompatible middle atom sets");
  for (std::size_t y = 0; y < mid1.size(); ++y)
    if (std::abs(mid1[y] - mid2[y]) > kMassTol)
      throw std::invalid_argument("compose_subtransport: incompatible middle atom sets");

  const auto r1 = p1.col_sums();
  const auto r2 = p2.row_sums();
  std::vector<std::vector<PlanCell>> by_col(mid1.size());
  for (const auto& c : p1.cells()) by_col[c.col].push_back(c);
  std::vector<std::vector<PlanCell>> by_row(mid2.size());
  for (const auto& c : p2.cells()) by_row[c.row].push_back(c);

  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (std::size_t y = 0; y < mid1.size(); ++y) {
    const double meet = std::min(r1[y], r2[y]);
    if (meet <= 0.0) continue;
    const double scale = meet / (r1[y] * r2[y]);
    for (const auto& a : by_col[y])
      for (const auto& b : by_row[y]) acc[{a.row, b.col}] += a.mass * b.mass * scale;
  }
  std::vector<PlanCell> cells;
  cells.reserve(acc.size());
  for (const auto& [key, m] : acc) cells.push_back({key.first, key.second, m});
  return Plan(p1.row_atoms(), p2.col_atoms(), std::move(cells));
}

}  // namespace isolip

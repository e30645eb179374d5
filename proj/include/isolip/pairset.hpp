#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isolip/common.hpp"

namespace isolip {

/// A finite set of points in the plane, the carrier of the iso-deviation and
/// of the distortion from the diagonal. Exact duplicates are removed on
/// construction.
class PairSet {
 public:
  using Point = std::pair<double, double>;

  PairSet() = default;

  explicit PairSet(std::vector<Point> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
  }

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

 private:
  std::vector<Point> points_;
};

/// Iso-deviation of a finite set: the maximum of y - y' - max(x - x', 0)
/// over ordered point pairs, the self-pair included. Non-negative for any
/// nonempty set; the supremum over the empty set is undefined and rejected.
inline double dev_succ(const PairSet& s) {
  if (s.empty()) throw std::invalid_argument("dev_succ: empty set");
  double best = 0.0;  // self-pairs contribute 0
  for (const auto& [x, y] : s.points()) {
    for (const auto& [x2, y2] : s.points()) {
      best = std::max(best, y - y2 - std::max(x - x2, 0.0));
    }
  }
  return best;
}

/// Distortion from the diagonal of a set: max |x - y|.
inline double dis_delta(const PairSet& s) {
  if (s.empty()) throw std::invalid_argument("dis_delta: empty set");
  double best = 0.0;
  for (const auto& [x, y] : s.points()) best = std::max(best, std::abs(x - y));
  return best;
}

/// Two-sided Hausdorff distance between nonempty finite sets under the l1
/// metric on the plane.
inline double hausdorff_l1(const PairSet& s, const PairSet& t) {
  if (s.empty() || t.empty()) throw std::invalid_argument("hausdorff_l1: empty set");
  auto one_sided = [](const PairSet& from, const PairSet& to) {
    double worst = 0.0;
    for (const auto& [x, y] : from.points()) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& [x2, y2] : to.points())
        nearest = std::min(nearest, std::abs(x - x2) + std::abs(y - y2));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(one_sided(s, t), one_sided(t, s));
}

}  // namespace isolip

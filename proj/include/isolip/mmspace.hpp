#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "isolip/common.hpp"
#include "isolip/measure.hpp"

namespace isolip {

inline constexpr std::size_t kDefaultSpaceBudget = 4096;

/// One metric-axiom violation found by validate_metric, with the witnessing
/// point indices.
struct MetricViolation {
  enum class Kind { Symmetry, Diagonal, Negative, Triangle, WeightSum, WeightSign };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;
  std::string detail;
};

struct MetricReport {
  std::vector<MetricViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// A finite metric measure space: a dense symmetric distance matrix and a
/// probability weight per point. Immutable after construction.
class FiniteMMSpace {
 public:
  FiniteMMSpace(std::size_t n_points, std::vector<double> dist, std::vector<double> weights,
                std::vector<std::string> labels = {})
      : n_(n_points), dist_(std::move(dist)), weights_(std::move(weights)),
        labels_(std::move(labels)) {
    if (n_ == 0) throw std::invalid_argument("FiniteMMSpace: empty space");
    if (dist_.size() != n_ * n_)
      throw std::invalid_argument("FiniteMMSpace: distance matrix shape mismatch");
    if (weights_.size() != n_)
      throw std::invalid_argument("FiniteMMSpace: weight count mismatch");
    if (!labels_.empty() && labels_.size() != n_)
      throw std::invalid_argument("FiniteMMSpace: label count mismatch");
    double mass = 0.0;
    for (double w : weights_) {
      if (!(w > 0.0)) throw std::invalid_argument("FiniteMMSpace: weights must be positive");
      mass += w;
    }
    if (std::abs(mass - 1.0) > kMassTol)
      throw std::invalid_argument("FiniteMMSpace: weights must sum to 1");
  }

  std::size_t size() const { return n_; }
  double dist(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  const std::vector<double>& dist_matrix() const { return dist_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }

  double diameter() const {
    double d = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) d = std::max(d, dist(i, j));
    return d;
  }

  bool uniform_weights() const {
    const double w0 = 1.0 / static_cast<double>(n_);
    for (double w : weights_)
      if (std::abs(w - w0) > kMassTol) return false;
    return true;
  }

  /// Returns a copy with all distances multiplied by t > 0 (the space tX).
  FiniteMMSpace scaled(double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
    std::vector<double> d = dist_;
    for (double& v : d) v *= t;
    return FiniteMMSpace(n_, std::move(d), weights_, labels_);
  }

  /// Checks every metric axiom and the weight normalization, listing each
  /// violation with its witnessing triple. Triangle checks use kMetricTol.
  MetricReport validate_metric() const {
    MetricReport report;
    using K = MetricViolation::Kind;
    for (std::size_t i = 0; i < n_; ++i) {
      if (std::abs(dist(i, i)) > kMetricTol)
        report.violations.push_back({K::Diagonal, i, i, 0, "nonzero diagonal"});
      for (std::size_t j = 0; j < n_; ++j) {
        if (dist(i, j) < -kMetricTol)
          report.violations.push_back({K::Negative, i, j, 0, "negative distance"});
        if (std::abs(dist(i, j) - dist(j, i)) > kMetricTol)
          report.violations.push_back({K::Symmetry, i, j, 0, "asymmetric entry"});
      }
    }
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          if (dist(i, k) > dist(i, j) + dist(j, k) + kMetricTol) {
            report.violations.push_back({K::Triangle, i, j, k, "triangle inequality"});
          }
    return report;
  }

  /// Closed neighborhood B_r(A): every point within distance r of the
  /// nonempty index set A. Distances compare with kMetricTol slack so that
  /// radii assembled from atom differences land on exact lattice values.
  std::vector<std::size_t> closed_neighborhood(const std::vector<std::size_t>& a,
                                               double r) const {
    if (a.empty()) throw std::invalid_argument("closed_neighborhood: empty set");
    if (r < 0.0) throw std::invalid_argument("closed_neighborhood: negative radius");
    for (std::size_t p : a)
      if (p >= n_) throw std::invalid_argument("closed_neighborhood: index out of range");
    std::vector<std::size_t> out;
    for (std::size_t y = 0; y < n_; ++y) {
      double nearest = std::numeric_limits<double>::infinity();
      for (std::size_t p : a) nearest = std::min(nearest, dist(y, p));
      if (nearest <= r + kMetricTol) out.push_back(y);
    }
    return out;
  }

  /// Pushforward of the space's measure under x -> d(x, base).
  AtomicMeasure distance_pushforward(std::size_t base) const {
    if (base >= n_) throw std::invalid_argument("distance_pushforward: bad base index");
    std::vector<double> atoms(n_);
    for (std::size_t i = 0; i < n_; ++i) atoms[i] = dist(i, base);
    return AtomicMeasure(std::move(atoms), weights_);
  }

 private:
  std::size_t n_;
  std::vector<double> dist_;     // row-major n x n
  std::vector<double> weights_;
  std::vector<std::string> labels_;
};

namespace detail {

inline void check_space_budget(double points, std::size_t budget) {
  if (points > static_cast<double>(budget))
    throw budget_error("space budget exceeded: " + std::to_string(points) + " points > " +
                       std::to_string(budget));
}

inline std::string tuple_label(const std::vector<int>& digits) {
  std::string s = "(";
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0) s += ",";
    s += std::to_string(digits[i]);
  }
  return s + ")";
}

}  // namespace detail

/// The discrete cube [k]^n with l1 distance scaled by `scale` and the
/// uniform measure. scale = 1/k yields the grid (1/k)[k]^n.
inline FiniteMMSpace make_cube(int k, int n, double scale = 1.0,
                               std::size_t budget = kDefaultSpaceBudget) {
  if (k < 2) throw std::invalid_argument("make_cube: k must be at least 2");
  if (n < 1) throw std::invalid_argument("make_cube: n must be at least 1");
  if (!(scale > 0.0)) throw std::invalid_argument("make_cube: scale must be positive");
  detail::check_space_budget(std::pow(double(k), double(n)), budget);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(k);

  auto digits = [&](std::size_t idx) {
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) {
      d[i] = static_cast<int>(idx % static_cast<std::size_t>(k));
      idx /= static_cast<std::size_t>(k);
    }
    return d;
  };
  std::vector<double> dist(total * total, 0.0);
  std::vector<std::string> labels(total);
  std::vector<std::vector<int>> pts(total);
  for (std::size_t i = 0; i < total; ++i) {
    pts[i] = digits(i);
    labels[i] = detail::tuple_label(pts[i]);
  }
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) {
      int d = 0;
      for (int c = 0; c < n; ++c) d += std::abs(pts[i][c] - pts[j][c]);
      dist[i * total + j] = scale * d;
    }
  std::vector<double> w(total, 1.0 / static_cast<double>(total));
  return FiniteMMSpace(total, std::move(dist), std::move(w), std::move(labels));
}

/// The discrete torus (Z/kZ)^n with cyclic l1 distance and uniform measure.
/// k must be even, as in the isoperimetric example this space instantiates.
inline FiniteMMSpace make_torus(int k, int n, std::size_t budget = kDefaultSpaceBudget) {
  if (k < 2) throw std::invalid_argument("make_torus: k must be at least 2");
  if (k % 2 != 0)
    throw std::invalid_argument(
        "make_torus: k must be even (the torus isoperimetric inequality assumes it)");
  if (n < 1) throw std::invalid_argument("make_torus: n must be at least 1");
  detail::check_space_budget(std::pow(double(k), double(n)), budget);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(k);
  auto digits = [&](std::size_t idx) {
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) {
      d[i] = static_cast<int>(idx % static_cast<std::size_t>(k));
      idx /= static_cast<std::size_t>(k);
    }
    return d;
  };
  std::vector<std::vector<int>> pts(total);
  std::vector<std::string> labels(total);
  for (std::size_t i = 0; i < total; ++i) {
    pts[i] = digits(i);
    labels[i] = detail::tuple_label(pts[i]);
  }
  std::vector<double> dist(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) {
      int d = 0;
      for (int c = 0; c < n; ++c) {
        int delta = std::abs(pts[i][c] - pts[j][c]);
        d += std::min(delta, k - delta);
      }
      dist[i * total + j] = d;
    }
  std::vector<double> w(total, 1.0 / static_cast<double>(total));
  return FiniteMMSpace(total, std::move(dist), std::move(w), std::move(labels));
}

/// Explicit adjacency structure for one product factor.
struct Graph {
  int order = 0;
  std::vector<std::pair<int, int>> edges;
};

namespace detail {

/// All-pairs path metric of a connected graph by BFS from every vertex.
inline std::vector<int> graph_path_metric(const Graph& g) {
  const int k = g.order;
  if (k < 2) throw std::invalid_argument("make_product_graph: factor order must be >= 2");
  std::vector<std::vector<int>> adj(k);
  for (auto [u, v] : g.edges) {
    if (u < 0 || v < 0 || u >= k || v >= k)
      throw std::invalid_argument("make_product_graph: edge endpoint out of range");
    if (u == v) continue;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> dist(static_cast<std::size_t>(k) * k, -1);
  for (int s = 0; s < k; ++s) {
    std::deque<int> queue{s};
    dist[s * k + s] = 0;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int v : adj[u])
        if (dist[s * k + v] < 0) {
          dist[s * k + v] = dist[s * k + u] + 1;
          queue.push_back(v);
        }
    }
    for (int v = 0; v < k; ++v)
      if (dist[s * k + v] < 0)
        throw std::invalid_argument("make_product_graph: factor graph is disconnected");
  }
  return dist;
}

}  // namespace detail

/// Cartesian product of connected graphs of a common order k >= 2, with the
/// product path metric (sum of per-factor path metrics) and the uniform
/// measure.
inline FiniteMMSpace make_product_graph(const std::vector<Graph>& graphs,
                                        std::size_t budget = kDefaultSpaceBudget) {
  if (graphs.empty()) throw std::invalid_argument("make_product_graph: no factors");
  const int k = graphs.front().order;
  for (const auto& g : graphs)
    if (g.order != k)
      throw std::invalid_argument("make_product_graph: factors must share the same order");
  const int n = static_cast<int>(graphs.size());
  detail::check_space_budget(std::pow(double(k), double(n)), budget);
  std::vector<std::vector<int>> metrics;
  metrics.reserve(graphs.size());
  for (const auto& g : graphs) metrics.push_back(detail::graph_path_metric(g));

  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(k);
  auto digits = [&](std::size_t idx) {
    std::vector<int> d(n);
    for (int i = 0; i < n; ++i) {
      d[i] = static_cast<int>(idx % static_cast<std::size_t>(k));
      idx /= static_cast<std::size_t>(k);
    }
    return d;
  };
  std::vector<std::vector<int>> pts(total);
  std::vector<std::string> labels(total);
  for (std::size_t i = 0; i < total; ++i) {
    pts[i] = digits(i);
    labels[i] = detail::tuple_label(pts[i]);
  }
  std::vector<double> dist(total * total, 0.0);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j) {
      int d = 0;
      for (int c = 0; c < n; ++c) d += metrics[c][pts[i][c] * k + pts[j][c]];
      dist[i * total + j] = d;
    }
  std::vector<double> w(total, 1.0 / static_cast<double>(total));
  return FiniteMMSpace(total, std::move(dist), std::move(w), std::move(labels));
}

/// Path graph P_k on vertices 0..k-1.
inline Graph path_graph(int k) {
  Graph g{k, {}};
  for (int i = 0; i + 1 < k; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

/// Cycle graph C_k.
inline Graph cycle_graph(int k) {
  Graph g = path_graph(k);
  if (k > 2) g.edges.emplace_back(k - 1, 0);
  return g;
}

/// Complete graph K_k.
inline Graph complete_graph(int k) {
  Graph g{k, {}};
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) g.edges.emplace_back(i, j);
  return g;
}

}  // namespace isolip

#pragma once

#include <cstddef>
#include <deque>
#include <limits>
#include <vector>

#include "isolip/common.hpp"
#include "isolip/plan.hpp"

namespace isolip {

/// Dinic max-flow on real-valued capacities. Residuals below kFlowEps count
/// as saturated. Edge order is fixed by insertion, so results are
/// deterministic.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : head_(n, kNone) {}

  /// Adds a directed edge and returns its id for later flow queries.
  std::size_t add_edge(std::size_t u, std::size_t v, double cap) {
    const std::size_t id = edges_.size();
    edges_.push_back({v, head_[u], cap});
    head_[u] = id;
    edges_.push_back({u, head_[v], 0.0});
    head_[v] = id + 1;
    return id;
  }

  double solve(std::size_t s, std::size_t t) {
    double total = 0.0;
    while (bfs(s, t)) {
      iter_ = head_;
      double f;
      while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > kFlowEps) total += f;
    }
    return total;
  }

  /// Flow pushed along edge `id` (as returned by add_edge).
  double flow_on(std::size_t id) const { return edges_[id + 1].cap; }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  struct Edge {
    std::size_t to;
    std::size_t next;
    double cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    level_.assign(head_.size(), kNone);
    std::deque<std::size_t> queue{s};
    level_[s] = 0;
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (std::size_t e = head_[u]; e != kNone; e = edges_[e].next) {
        if (edges_[e].cap > kFlowEps && level_[edges_[e].to] == kNone) {
          level_[edges_[e].to] = level_[u] + 1;
          queue.push_back(edges_[e].to);
        }
      }
    }
    return level_[t] != kNone;
  }

  double dfs(std::size_t u, std::size_t t, double limit) {
    if (u == t) return limit;
    for (std::size_t& e = iter_[u]; e != kNone; e = edges_[e].next) {
      Edge& fwd = edges_[e];
      if (fwd.cap > kFlowEps && level_[fwd.to] == level_[u] + 1) {
        const double pushed = dfs(fwd.to, t, std::min(limit, fwd.cap));
        if (pushed > kFlowEps) {
          fwd.cap -= pushed;
          edges_[e ^ 1].cap += pushed;
          return pushed;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::size_t> head_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> level_;
  std::vector<std::size_t> iter_;
};

struct TransportMax {
  double mass = 0.0;
  std::vector<PlanCell> cells;  // an optimal subplan attaining it
};

/// Maximum total mass of a nonnegative matrix supported on `allowed` cells
/// with row sums below row_caps and column sums below col_caps, together
/// with an attaining subplan. This is the bipartite transportation max-flow.
inline TransportMax max_mass_on_cells(
    const std::vector<double>& row_caps, const std::vector<double>& col_caps,
    const std::vector<std::pair<std::size_t, std::size_t>>& allowed) {
  const std::size_t m = row_caps.size(), n = col_caps.size();
  MaxFlow net(m + n + 2);
  const std::size_t src = m + n, dst = m + n + 1;
  for (std::size_t i = 0; i < m; ++i) net.add_edge(src, i, row_caps[i]);
  for (std::size_t j = 0; j < n; ++j) net.add_edge(m + j, dst, col_caps[j]);
  std::vector<std::size_t> ids;
  ids.reserve(allowed.size());
  for (const auto& [i, j] : allowed) ids.push_back(net.add_edge(i, m + j, row_caps[i]));
  TransportMax out;
  out.mass = net.solve(src, dst);
  for (std::size_t k = 0; k < allowed.size(); ++k) {
    const double f = net.flow_on(ids[k]);
    if (f > kFlowEps) out.cells.push_back({allowed[k].first, allowed[k].second, f});
  }
  return out;
}

/// Extends a subplan to a full coupling between the given marginals by
/// routing the leftover row supply and column demand in index order
/// (northwest completion). The extra mass may land anywhere on the grid.
inline std::vector<PlanCell> complete_to_coupling(const std::vector<double>& row_weights,
                                                  const std::vector<double>& col_weights,
                                                  std::vector<PlanCell> cells) {
  std::vector<double> rdef = row_weights;
  std::vector<double> cdef = col_weights;
  for (const auto& c : cells) {
    rdef[c.row] -= c.mass;
    cdef[c.col] -= c.mass;
  }
  std::size_t i = 0, j = 0;
  while (i < rdef.size() && j < cdef.size()) {
    if (rdef[i] <= kFlowEps) {
      ++i;
      continue;
    }
    if (cdef[j] <= kFlowEps) {
      ++j;
      continue;
    }
    const double m = std::min(rdef[i], cdef[j]);
    cells.push_back({i, j, m});
    rdef[i] -= m;
    cdef[j] -= m;
  }
  return cells;
}

}  // namespace isolip

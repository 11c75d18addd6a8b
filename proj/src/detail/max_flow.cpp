// max_flow.cpp — Dinic blocking-flow implementation.

#include "detail/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace mmd::detail {

namespace {
// Residual capacities below this are treated as saturated; capacities here
// are probability masses, so the scale is always O(1).
constexpr double kResidualEps = 1e-12;
}  // namespace

MaxFlow::MaxFlow(int nodes) : adj_(nodes) {}

int MaxFlow::add_edge(int u, int v, double capacity) {
  const int id = static_cast<int>(edge_refs_.size());
  adj_[u].push_back({v, capacity, static_cast<int>(adj_[v].size())});
  adj_[v].push_back({u, 0.0, static_cast<int>(adj_[u].size()) - 1});
  edge_refs_.emplace_back(u, static_cast<int>(adj_[u].size()) - 1);
  original_capacity_.push_back(capacity);
  return id;
}

bool MaxFlow::bfs_levels(int s, int t) {
  level_.assign(adj_.size(), -1);
  std::queue<int> queue;
  level_[s] = 0;
  queue.push(s);
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop();
    for (const Edge& e : adj_[u]) {
      if (e.capacity > kResidualEps && level_[e.to] < 0) {
        level_[e.to] = level_[u] + 1;
        queue.push(e.to);
      }
    }
  }
  return level_[t] >= 0;
}

double MaxFlow::push(int v, int t, double limit) {
  if (v == t) return limit;
  for (int& i = next_arc_[v]; i < static_cast<int>(adj_[v].size()); ++i) {
    Edge& e = adj_[v][i];
    if (e.capacity > kResidualEps && level_[e.to] == level_[v] + 1) {
      const double pushed = push(e.to, t, std::min(limit, e.capacity));
      if (pushed > 0.0) {
        e.capacity -= pushed;
        adj_[e.to][e.reverse].capacity += pushed;
        return pushed;
      }
    }
  }
  return 0.0;
}

double MaxFlow::run(int s, int t) {
  double total = 0.0;
  while (bfs_levels(s, t)) {
    next_arc_.assign(adj_.size(), 0);
    for (;;) {
      const double pushed = push(s, t, std::numeric_limits<double>::infinity());
      if (pushed <= 0.0) break;
      total += pushed;
    }
  }
  return total;
}

double MaxFlow::flow_on(int edge_id) const {
  const auto [node, slot] = edge_refs_[edge_id];
  // Flow = original capacity minus residual.
  const double residual = adj_[node][slot].capacity;
  const double f = original_capacity_[edge_id] - residual;
  return f > 0.0 ? f : 0.0;
}

}  // namespace mmd::detail

// max_flow.hpp — Dinic max-flow with real-valued capacities.
//
// Used for coupling-feasibility questions: "is there a transport plan
// supported on short arcs" (threshold Wasserstein-infinity) and "how much
// mass must travel on long arcs" (Lévy–Prokhorov leakage).  Capacities are
// probabilities, so everything is O(1)-scaled and a fixed 1e-12 threshold
// decides residual saturation.
#pragma once

#include <vector>

namespace mmd::detail {

class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  // Adds a directed edge u -> v with the given capacity and returns its edge
  // id (for flow queries later).
  int add_edge(int u, int v, double capacity);

  // Runs Dinic from s to t; returns the max-flow value.  Deterministic for a
  // fixed edge insertion order.
  double run(int s, int t);

  // Flow pushed on the edge with the given id (insertion order).
  double flow_on(int edge_id) const;

 private:
  struct Edge {
    int to;
    double capacity;  // residual
    int reverse;      // index of the reverse edge in adj_[to]
  };

  bool bfs_levels(int s, int t);
  double push(int v, int t, double limit);

  std::vector<std::vector<Edge>> adj_;
  std::vector<std::pair<int, int>> edge_refs_;  // edge id -> (node, slot)
  std::vector<double> original_capacity_;
  std::vector<int> level_;
  std::vector<int> next_arc_;
};

}  // namespace mmd::detail

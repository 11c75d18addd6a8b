// length_graph.hpp — weighted undirected graphs and their shortest-path
// metric.
//
// A LengthGraph discretizes a length space: vertices carry optional Euclidean
// coordinates and each edge a strictly positive length.  intrinsic_metric()
// turns a connected graph into a FiniteMetricSpace whose distances are
// shortest edge-path sums.
#pragma once

#include <vector>

#include "mmdist/metric_space.hpp"

namespace mmd {

struct LengthGraph {
  struct Edge {
    int u = 0;
    int v = 0;
    double length = 0.0;
  };

  int vertices = 0;
  std::vector<Edge> edges;
  // Optional per-vertex coordinates (empty, or one vector per vertex).
  std::vector<std::vector<double>> coords;
};

// Shape checks: vertex indices in range, positive finite edge lengths,
// coordinate count.  Throws InvalidInput on violation.
void check_graph(const LengthGraph& graph);

// Largest vertex count intrinsic_metric accepts; the full distance matrix for
// n points needs 8*n^2 bytes, so this guards against accidental multi-GB
// allocations.
inline constexpr int kMaxIntrinsicPoints = 6000;

// All-pairs shortest-path metric of a connected graph (Dijkstra from every
// vertex).  Coordinates are carried over.  Throws InvalidInput for a
// disconnected graph (naming an unreachable pair) and ResourceError above
// kMaxIntrinsicPoints.
FiniteMetricSpace intrinsic_metric(const LengthGraph& graph);

}  // namespace mmd

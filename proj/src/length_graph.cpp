// length_graph.cpp — graph checks and the shortest-path metric.

#include "mmdist/length_graph.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <utility>

#include "mmdist/errors.hpp"

namespace mmd {

void check_graph(const LengthGraph& graph) {
  if (graph.vertices <= 0) throw InvalidInput("graph needs at least one vertex");
  for (const auto& e : graph.edges) {
    if (e.u < 0 || e.u >= graph.vertices || e.v < 0 || e.v >= graph.vertices) {
      std::ostringstream msg;
      msg << "edge (" << e.u << "," << e.v << ") references a vertex outside [0,"
          << graph.vertices << ")";
      throw InvalidInput(msg.str());
    }
    if (e.u == e.v) {
      std::ostringstream msg;
      msg << "self-loop at vertex " << e.u;
      throw InvalidInput(msg.str());
    }
    if (!(e.length > 0.0) || !std::isfinite(e.length)) {
      std::ostringstream msg;
      msg << "edge (" << e.u << "," << e.v << ") has non-positive or non-finite length "
          << e.length;
      throw InvalidInput(msg.str());
    }
  }
  if (!graph.coords.empty() &&
      graph.coords.size() != static_cast<std::size_t>(graph.vertices)) {
    throw InvalidInput("coordinate list length does not match vertex count");
  }
}

FiniteMetricSpace intrinsic_metric(const LengthGraph& graph) {
  check_graph(graph);
  const int n = graph.vertices;
  if (n > kMaxIntrinsicPoints) {
    std::ostringstream msg;
    msg << "intrinsic metric on " << n << " vertices would need a " << n << "x" << n
        << " matrix; limit is " << kMaxIntrinsicPoints << " vertices";
    throw ResourceError(msg.str());
  }

  // Adjacency lists.
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : graph.edges) {
    adj[e.u].emplace_back(e.v, e.length);
    adj[e.v].emplace_back(e.u, e.length);
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(n) * n, inf);
  std::vector<double> d(n);
  using QueueEntry = std::pair<double, int>;  // (distance, vertex)
  for (int src = 0; src < n; ++src) {
    std::fill(d.begin(), d.end(), inf);
    d[src] = 0.0;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>> queue;
    queue.emplace(0.0, src);
    while (!queue.empty()) {
      const auto [du, u] = queue.top();
      queue.pop();
      if (du > d[u]) continue;
      for (const auto& [v, len] : adj[u]) {
        const double cand = du + len;
        if (cand < d[v]) {
          d[v] = cand;
          queue.emplace(cand, v);
        }
      }
    }
    for (int v = 0; v < n; ++v) {
      if (d[v] == inf) {
        std::ostringstream msg;
        msg << "graph is disconnected: no path from vertex " << src << " to vertex " << v;
        throw InvalidInput(msg.str());
      }
      dist[static_cast<std::size_t>(src) * n + v] = d[v];
    }
  }
  // Shortest-path sums accumulate in opposite edge orders for the two
  // directions of a pair, which can differ in the last bit for non-dyadic
  // edge lengths.  Symmetrize exactly by keeping the smaller value.
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const std::size_t ij = static_cast<std::size_t>(i) * n + j;
      const std::size_t ji = static_cast<std::size_t>(j) * n + i;
      const double m = dist[ij] < dist[ji] ? dist[ij] : dist[ji];
      dist[ij] = m;
      dist[ji] = m;
    }
  }
  return FiniteMetricSpace(n, std::move(dist), {}, graph.coords);
}

}  // namespace mmd

// bipartite_match.cpp — Hopcroft–Karp implementation.

#include "detail/bipartite_match.hpp"

#include <limits>
#include <queue>

namespace mmd::detail {

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

struct HopcroftKarp {
  const std::vector<std::vector<int>>& adj;
  std::vector<int>& match_left;
  std::vector<int> match_right;
  std::vector<int> dist;

  HopcroftKarp(const std::vector<std::vector<int>>& adjacency, int n_right,
               std::vector<int>& ml)
      : adj(adjacency), match_left(ml), match_right(n_right, -1), dist(adjacency.size()) {}

  bool bfs() {
    std::queue<int> queue;
    bool found_free = false;
    for (std::size_t u = 0; u < adj.size(); ++u) {
      if (match_left[u] < 0) {
        dist[u] = 0;
        queue.push(static_cast<int>(u));
      } else {
        dist[u] = kInf;
      }
    }
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (int v : adj[u]) {
        const int w = match_right[v];
        if (w < 0) {
          found_free = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          queue.push(w);
        }
      }
    }
    return found_free;
  }

  bool dfs(int u) {
    for (int v : adj[u]) {
      const int w = match_right[v];
      if (w < 0 || (dist[w] == dist[u] + 1 && dfs(w))) {
        match_left[u] = v;
        match_right[v] = u;
        return true;
      }
    }
    dist[u] = kInf;
    return false;
  }
};

}  // namespace

int max_bipartite_matching(const std::vector<std::vector<int>>& adjacency, int n_right,
                           std::vector<int>& match_left) {
  match_left.assign(adjacency.size(), -1);
  HopcroftKarp hk(adjacency, n_right, match_left);
  int matched = 0;
  while (hk.bfs()) {
    for (std::size_t u = 0; u < adjacency.size(); ++u) {
      if (match_left[u] < 0 && hk.dfs(static_cast<int>(u))) ++matched;
    }
  }
  return matched;
}

}  // namespace mmd::detail

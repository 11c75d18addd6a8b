// bipartite_match.hpp — Hopcroft–Karp maximum bipartite matching.
//
// Used by the bottleneck matcher: a threshold r is feasible exactly when the
// graph of pairs within distance r admits a perfect matching.
#pragma once

#include <vector>

namespace mmd::detail {

// adjacency[i] lists the right-side vertices available to left vertex i
// (indices 0..n_right).  Returns the matching size and fills match_left
// (n_left entries, -1 for unmatched).  Deterministic for a fixed adjacency
// order.
int max_bipartite_matching(const std::vector<std::vector<int>>& adjacency, int n_right,
                           std::vector<int>& match_left);

}  // namespace mmd::detail

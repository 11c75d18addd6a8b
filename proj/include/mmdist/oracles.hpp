// oracles.hpp — independent brute-force reference implementations.
//
// Everything here recomputes a quantity straight from its definition with no
// shared code or state with the production solvers: transport values by
// enumerating the vertices of the transportation polytope, bottleneck values
// by trying every permutation, and the Lévy–Prokhorov distance by checking
// every subset at every candidate radius.  Intentionally slow, obviously
// correct; used by the test suite and the `verify` CLI subcommand.
#pragma once

#include <vector>

#include "mmdist/measure.hpp"

namespace mmd {

// Exact p-Wasserstein value between mu and nu (measures on one space) by
// enumerating all spanning trees of the bipartite support graph — i.e. all
// basic solutions of the transportation polytope — and minimizing the cost
// over the feasible ones.  Throws ResourceError when either support exceeds
// 4 points.  p must be finite, >= 1.
double transport_vertices(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                          double p);

struct BottleneckResult {
  double value = 0.0;
  // ys[perm[i]] is matched to xs[i].
  std::vector<int> perm;
};

// Minimal possible maximum matched distance between the point lists xs and ys
// (equal length, <= 7) by exhaustive search over all permutations.  Ties are
// resolved to the lexicographically smallest permutation.
BottleneckResult bottleneck_bruteforce(const FiniteMetricSpace& space,
                                       const std::vector<int>& xs,
                                       const std::vector<int>& ys);

// Lévy–Prokhorov distance straight from the definition: the smallest
// candidate r such that mu(U) <= nu(U_r) + r and nu(U) <= mu(U_r) + r for
// every subset U, where U_r is the union of open r-balls around U.
// Candidates are the distance values plus a uniform grid of step 1e-4, so the
// result is exact up to that grid resolution.  Space size <= 5.
double lp_subset_oracle(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);

}  // namespace mmd

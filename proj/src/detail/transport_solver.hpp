// transport_solver.hpp — exact solver for the balanced transportation
// problem: minimize sum(flow_ij * cost_ij) subject to prescribed row sums
// (supplies) and column sums (demands), flow >= 0.
//
// This is the primal engine behind every Wasserstein-p value.  It is a
// network simplex specialized to the complete bipartite graph: bases are
// spanning trees, pivots swap one arc, and the final basis certifies
// optimality through its dual potentials.  No regularization — values are
// exact up to floating-point rounding.
#pragma once

#include <vector>

namespace mmd::detail {

struct TransportSolution {
  double cost = 0.0;           // optimal objective value
  std::vector<double> flow;    // n*m row-major optimal plan
  std::vector<double> dual_u;  // supply-side potentials (n)
  std::vector<double> dual_v;  // demand-side potentials (m); on the optimal
                               // basis, dual_u[i] + dual_v[j] = cost[i][j]
                               // for every basic arc.
};

// supply (n entries) and demand (m entries) must be strictly positive with
// equal totals up to 1e-9 (demands are rescaled to balance exactly).
// cost is n*m row-major, nonnegative and finite.
// Deterministic: fixed pivot rules, no randomization.
TransportSolution solve_transportation(int n, int m, const std::vector<double>& cost,
                                       std::vector<double> supply,
                                       std::vector<double> demand);

}  // namespace mmd::detail

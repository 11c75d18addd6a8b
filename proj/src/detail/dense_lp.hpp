// dense_lp.hpp — small dense linear-programming solver.
//
// Solves  maximize c^T x  subject to  A x <= b,  x >= 0  with b >= 0,
// via the primal simplex method on the full tableau, starting from the
// slack basis.  Bland's rule guarantees termination.  Intended for small
// instances (hundreds of rows); the dual Wasserstein-1 formulation fits
// comfortably.
#pragma once

#include <vector>

namespace mmd::detail {

struct LpSolution {
  double value = 0.0;     // optimal objective
  std::vector<double> x;  // optimal primal point (size = number of variables)
};

// rows = number of constraints, cols = number of variables.
// a is rows*cols row-major.  Every entry of b must be >= 0 so the slack
// basis is feasible.  Throws CheckFailure if the LP is unbounded or the
// iteration budget is exhausted.
LpSolution solve_lp_max(int rows, int cols, const std::vector<double>& a,
                        const std::vector<double>& b, const std::vector<double>& c);

}  // namespace mmd::detail

#include "detail/dense_lp.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "mmdist/errors.hpp"

namespace mmd::detail {

LpSolution solve_lp_max(int rows, int cols, const std::vector<double>& a,
                        const std::vector<double>& b, const std::vector<double>& c) {
  if (rows < 0 || cols <= 0) throw InvalidInput("LP needs at least one variable");
  if (static_cast<int>(a.size()) != rows * cols || static_cast<int>(b.size()) != rows ||
      static_cast<int>(c.size()) != cols) {
    throw InvalidInput("LP has mismatched dimensions");
  }
  for (double bi : b) {
    if (!(bi >= 0.0) || !std::isfinite(bi)) {
      throw InvalidInput("LP right-hand sides must be nonnegative (slack basis start)");
    }
  }

  // Tableau: one row per constraint plus the objective row; columns are the
  // structural variables, the slacks, and the right-hand side.
  const int width = cols + rows + 1;
  const int rhs = width - 1;
  std::vector<double> t(static_cast<std::size_t>(rows + 1) * width, 0.0);
  auto at = [&](int r, int col) -> double& { return t[static_cast<std::size_t>(r) * width + col]; };

  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < cols; ++j) at(r, j) = a[static_cast<std::size_t>(r) * cols + j];
    at(r, cols + r) = 1.0;
    at(r, rhs) = b[r];
  }
  // Objective row carries z_j - c_j; with the slack basis z_j = 0.
  for (int j = 0; j < cols; ++j) at(rows, j) = -c[j];

  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) basis[r] = cols + r;

  double scale = 1.0;
  for (double cj : c) scale = std::max(scale, std::abs(cj));
  for (double aij : a) scale = std::max(scale, std::abs(aij));
  const double eps = 1e-11 * scale;

  const long iteration_cap = 500'000L;
  for (long iter = 0;; ++iter) {
    if (iter > iteration_cap) throw CheckFailure("LP solver exceeded its pivot budget");

    // Bland's rule: entering variable with the smallest column index whose
    // reduced cost is negative.
    int enter = -1;
    for (int j = 0; j < width - 1; ++j) {
      if (at(rows, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal

    // Ratio test; among the minimal ratios pick the row whose basic
    // variable has the smallest label (Bland again).
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      const double arj = at(r, enter);
      if (arj > eps) {
        const double ratio = at(r, rhs) / arj;
        if (ratio < best_ratio - 1e-15 ||
            (ratio <= best_ratio + 1e-15 && (leave < 0 || basis[r] < basis[leave]))) {
          best_ratio = std::min(best_ratio, ratio);
          leave = r;
        }
      }
    }
    if (leave < 0) throw CheckFailure("LP is unbounded");

    // Pivot on (leave, enter).
    const double piv = at(leave, enter);
    for (int j = 0; j < width; ++j) at(leave, j) /= piv;
    at(leave, enter) = 1.0;
    for (int r = 0; r <= rows; ++r) {
      if (r == leave) continue;
      const double f = at(r, enter);
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) at(r, j) -= f * at(leave, j);
      at(r, enter) = 0.0;
    }
    basis[leave] = enter;
  }

  LpSolution out;
  out.value = at(rows, rhs);
  out.x.assign(cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    if (basis[r] < cols) out.x[basis[r]] = std::max(0.0, at(r, rhs));
  }
  return out;
}

}  // namespace mmd::detail

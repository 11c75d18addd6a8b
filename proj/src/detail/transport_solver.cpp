#include "detail/transport_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include "mmdist/errors.hpp"

namespace mmd::detail {
namespace {

// A basic arc of the transportation tableau.  Nodes are numbered
// 0..n-1 (sources) and n..n+m-1 (sinks).
struct BasicArc {
  int i = 0;  // source index in [0, n)
  int j = 0;  // sink index in [0, m)
  double flow = 0.0;
};

// Tree structure rebuilt after every pivot.  For n+m nodes a basis has
// exactly n+m-1 arcs forming a spanning tree.
struct TreeState {
  std::vector<int> parent;      // parent node, -1 at root
  std::vector<int> parent_arc;  // index into basis of the arc to parent
  std::vector<int> depth;
  std::vector<double> pot;      // potentials: pot[i] + pot[n+j] = cost(i,j)
                                // for every basic arc (i, j)
};

void build_tree(int n, int m, const std::vector<double>& cost,
                const std::vector<BasicArc>& basis, TreeState& t) {
  const int nodes = n + m;
  t.parent.assign(nodes, -1);
  t.parent_arc.assign(nodes, -1);
  t.depth.assign(nodes, 0);
  t.pot.assign(nodes, 0.0);

  // Adjacency of the basis tree.
  std::vector<std::vector<std::pair<int, int>>> adj(nodes);  // (neighbor, arc)
  for (int a = 0; a < static_cast<int>(basis.size()); ++a) {
    const int u = basis[a].i;
    const int v = n + basis[a].j;
    adj[u].push_back({v, a});
    adj[v].push_back({u, a});
  }

  // BFS from node 0; potentials follow pot[child] = cost - pot[parent],
  // which encodes u_i + v_j = c_ij along every basic arc.
  std::vector<int> queue;
  queue.reserve(nodes);
  std::vector<char> seen(nodes, 0);
  queue.push_back(0);
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int u = queue[head];
    for (const auto& [v, a] : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      t.parent[v] = u;
      t.parent_arc[v] = a;
      t.depth[v] = t.depth[u] + 1;
      const double c = cost[static_cast<std::size_t>(basis[a].i) * m + basis[a].j];
      t.pot[v] = c - t.pot[u];
      queue.push_back(v);
    }
  }
  if (static_cast<int>(queue.size()) != nodes) {
    throw CheckFailure("transportation basis lost spanning-tree structure");
  }
}

}  // namespace

TransportSolution solve_transportation(int n, int m, const std::vector<double>& cost,
                                       std::vector<double> supply,
                                       std::vector<double> demand) {
  if (n <= 0 || m <= 0) throw InvalidInput("transportation problem needs nonempty sides");
  if (static_cast<int>(supply.size()) != n || static_cast<int>(demand.size()) != m ||
      static_cast<int>(cost.size()) != n * m) {
    throw InvalidInput("transportation problem has mismatched dimensions");
  }
  double total_s = 0.0, total_d = 0.0, max_cost = 0.0;
  for (double s : supply) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InvalidInput("supplies must be positive and finite");
    total_s += s;
  }
  for (double d : demand) {
    if (!(d > 0.0) || !std::isfinite(d)) throw InvalidInput("demands must be positive and finite");
    total_d += d;
  }
  for (double c : cost) {
    if (!std::isfinite(c) || c < 0.0) throw InvalidInput("transportation costs must be finite and nonnegative");
    max_cost = std::max(max_cost, c);
  }
  if (std::abs(total_s - total_d) > 1e-9 * std::max(1.0, std::max(total_s, total_d))) {
    throw InvalidInput("transportation problem is unbalanced");
  }
  // Rescale demands so the totals match bit-exactly; otherwise the
  // northwest-corner staircase can strand a sliver of mass.
  {
    const double factor = total_s / total_d;
    for (double& d : demand) d *= factor;
  }

  const int nodes = n + m;
  std::vector<BasicArc> basis;
  basis.reserve(nodes - 1);

  // Northwest-corner initial basis: march down the tableau consuming
  // whichever side runs out first.  Produces exactly n+m-1 arcs (some
  // possibly degenerate with zero flow), always a spanning tree.
  {
    std::vector<double> a = supply, b = demand;
    int i = 0, j = 0;
    while (static_cast<int>(basis.size()) < nodes - 1) {
      const double f = std::max(0.0, std::min(a[i], b[j]));
      basis.push_back({i, j, f});
      a[i] -= f;
      b[j] -= f;
      bool advance_i;
      if (i == n - 1) {
        advance_i = false;
      } else if (j == m - 1) {
        advance_i = true;
      } else {
        advance_i = (a[i] <= b[j]);
      }
      if (advance_i) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  TreeState tree;
  build_tree(n, m, cost, basis, tree);

  // Reduced-cost tolerance scaled to the data.  Computed reduced costs carry
  // absolute floating-point error of roughly max_cost * 1e-14 (potentials are
  // alternating sums of basic-arc costs along tree paths), so this sits a
  // safe factor above the noise floor without sacrificing much optimality.
  const double eps = 1e-13 * (1.0 + max_cost);

  // Pivot loop.  Dantzig's rule (most negative reduced cost) with the
  // lexicographically first arc on ties normally terminates quickly; a
  // generous iteration guard switches to Bland's rule, which cannot cycle.
  const long dantzig_limit = 1000L + 64L * nodes;
  const long bland_limit = 4'000'000L;
  long pivots = 0;
  bool bland = false;

  std::vector<int> cycle_arc;      // arcs on the pivot cycle (tree part)
  std::vector<signed char> cycle_dir;  // +1 flow increases, -1 decreases

  for (;;) {
    // --- entering arc ---
    int ei = -1, ej = -1;
    double best = -eps;
    bool found = false;
    for (int i = 0; i < n && !(bland && found); ++i) {
      const double ui = tree.pot[i];
      const double* crow = cost.data() + static_cast<std::size_t>(i) * m;
      for (int j = 0; j < m; ++j) {
        const double r = crow[j] - ui - tree.pot[n + j];
        if (r < best) {
          best = r;
          ei = i;
          ej = j;
          found = true;
          if (bland) break;  // Bland: first improving arc
        }
      }
    }
    if (!found) break;  // optimal

    ++pivots;
    if (!bland && pivots > dantzig_limit) {
      bland = true;
    }
    if (pivots > bland_limit) {
      throw CheckFailure("transportation solver exceeded its pivot budget");
    }

    // --- pivot cycle: entering arc (ei -> n+ej) plus the tree path from
    // n+ej back to ei.  Traversing a basic arc source->sink adds theta to
    // its flow; sink->source subtracts theta.
    cycle_arc.clear();
    cycle_dir.clear();
    {
      int x = n + ej, y = ei;
      // Two upward walks meeting at the lowest common ancestor.  The walk
      // from n+ej follows the cycle orientation; the walk from ei opposes
      // it, so its directions are flipped.
      std::vector<int> xa, ya;
      std::vector<signed char> xd, yd;
      while (tree.depth[x] > tree.depth[y]) {
        const int a = tree.parent_arc[x];
        const bool from_source = (x < n);  // moving source -> sink?
        xa.push_back(a);
        xd.push_back(from_source ? +1 : -1);
        x = tree.parent[x];
      }
      while (tree.depth[y] > tree.depth[x]) {
        const int a = tree.parent_arc[y];
        const bool from_source = (y < n);
        ya.push_back(a);
        yd.push_back(from_source ? -1 : +1);  // opposing direction: flipped
        y = tree.parent[y];
      }
      while (x != y) {
        {
          const int a = tree.parent_arc[x];
          const bool from_source = (x < n);
          xa.push_back(a);
          xd.push_back(from_source ? +1 : -1);
          x = tree.parent[x];
        }
        {
          const int a = tree.parent_arc[y];
          const bool from_source = (y < n);
          ya.push_back(a);
          yd.push_back(from_source ? -1 : +1);
          y = tree.parent[y];
        }
      }
      // Cycle order: entering arc, then x-side up, then y-side down.
      cycle_arc = xa;
      cycle_dir = xd;
      for (std::size_t k = ya.size(); k-- > 0;) {
        cycle_arc.push_back(ya[k]);
        cycle_dir.push_back(yd[k]);
      }
    }

    // --- ratio test: theta is the smallest flow on a decreasing arc; the
    // first such arc in cycle order leaves the basis.
    double theta = std::numeric_limits<double>::infinity();
    int leave_pos = -1;
    for (std::size_t k = 0; k < cycle_arc.size(); ++k) {
      if (cycle_dir[k] < 0) {
        const double f = basis[cycle_arc[k]].flow;
        if (f < theta) {
          theta = f;
          leave_pos = static_cast<int>(k);
        }
      }
    }
    if (leave_pos < 0) {
      // A bipartite cycle alternates arc directions, so a decreasing arc
      // always exists; reaching here means the tree state is corrupt.
      throw CheckFailure("transportation pivot found no leaving arc");
    }

    for (std::size_t k = 0; k < cycle_arc.size(); ++k) {
      basis[cycle_arc[k]].flow += (cycle_dir[k] > 0 ? theta : -theta);
    }
    const int leave_arc = cycle_arc[leave_pos];
    basis[leave_arc] = BasicArc{ei, ej, theta};
    build_tree(n, m, cost, basis, tree);
  }

  // --- assemble the solution ---
  TransportSolution out;
  out.flow.assign(static_cast<std::size_t>(n) * m, 0.0);
  long double acc = 0.0L;
  for (const BasicArc& a : basis) {
    double f = a.flow;
    if (f < 0.0) {
      if (f < -1e-9 * (1.0 + total_s)) {
        throw CheckFailure("transportation solver produced a negative flow");
      }
      f = 0.0;
    }
    out.flow[static_cast<std::size_t>(a.i) * m + a.j] += f;
    acc += static_cast<long double>(f) *
           static_cast<long double>(cost[static_cast<std::size_t>(a.i) * m + a.j]);
  }
  out.cost = static_cast<double>(acc);
  out.dual_u.assign(n, 0.0);
  out.dual_v.assign(m, 0.0);
  for (int i = 0; i < n; ++i) out.dual_u[i] = tree.pot[i];
  for (int j = 0; j < m; ++j) out.dual_v[j] = tree.pot[n + j];
  return out;
}

}  // namespace mmd::detail

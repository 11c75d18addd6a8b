// oracles.cpp — brute-force reference implementations.

#include "mmdist/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include "mmdist/errors.hpp"

namespace mmd {

namespace {

void require_shared_space(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  if (!mu.space()->same_metric_as(*nu.space())) {
    throw InvalidInput("measures live on different spaces");
  }
}

// Flows on a spanning tree of the bipartite supply/demand graph are uniquely
// determined; compute them by repeatedly resolving leaves.  Returns false if
// any flow is negative beyond rounding (infeasible basic solution).
bool solve_tree_flows(int n_sources, int n_sinks, const std::vector<std::pair<int, int>>& arcs,
                      const std::vector<double>& supply, const std::vector<double>& demand,
                      std::vector<double>& flows) {
  const int nodes = n_sources + n_sinks;
  const int n_arcs = static_cast<int>(arcs.size());
  std::vector<int> degree(nodes, 0);
  std::vector<bool> arc_done(arcs.size(), false);
  // Residual balance: positive for sources, negative for sinks.
  std::vector<double> balance(nodes, 0.0);
  for (int i = 0; i < n_sources; ++i) balance[i] = supply[i];
  for (int j = 0; j < n_sinks; ++j) balance[n_sources + j] = -demand[j];
  for (const auto& [u, v] : arcs) {
    ++degree[u];
    ++degree[v];
  }
  flows.assign(arcs.size(), 0.0);
  for (int step = 0; step < n_arcs; ++step) {
    int leaf = -1;
    for (int v = 0; v < nodes; ++v) {
      if (degree[v] == 1) {
        leaf = v;
        break;
      }
    }
    if (leaf < 0) return false;  // cycle remnant; not a tree
    int arc_idx = -1;
    for (int a = 0; a < n_arcs; ++a) {
      if (!arc_done[a] && (arcs[a].first == leaf || arcs[a].second == leaf)) {
        arc_idx = a;
        break;
      }
    }
    if (arc_idx < 0) return false;
    const auto [u, v] = arcs[arc_idx];
    const int other = (u == leaf) ? v : u;
    // Arc flow moves supply from the source end to the sink end; the leaf's
    // remaining balance fixes it.
    const bool leaf_is_source = leaf < n_sources;
    const double f = leaf_is_source ? balance[leaf] : -balance[leaf];
    if (f < -1e-12) return false;
    flows[arc_idx] = std::max(f, 0.0);
    balance[other] += balance[leaf];
    balance[leaf] = 0.0;
    arc_done[arc_idx] = true;
    --degree[leaf];
    --degree[other];
  }
  return true;
}

}  // namespace

double transport_vertices(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                          double p) {
  require_shared_space(mu, nu);
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidInput("transport order p must be finite and >= 1");
  }
  const std::vector<int> src = mu.support();
  const std::vector<int> dst = nu.support();
  const int n = static_cast<int>(src.size());
  const int m = static_cast<int>(dst.size());
  if (n > 4 || m > 4) {
    std::ostringstream msg;
    msg << "support sizes " << n << "x" << m << " exceed the 4x4 oracle budget";
    throw ResourceError(msg.str());
  }
  std::vector<double> supply(n), demand(m);
  for (int i = 0; i < n; ++i) supply[i] = mu.weight(src[i]);
  for (int j = 0; j < m; ++j) demand[j] = nu.weight(dst[j]);

  // All arcs of the complete bipartite support graph, with p-powered costs.
  std::vector<std::pair<int, int>> all_arcs;
  std::vector<long double> arc_cost;
  const FiniteMetricSpace& space = *mu.space();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      all_arcs.emplace_back(i, n + j);
      arc_cost.push_back(
          std::pow(static_cast<long double>(space.dist(src[i], dst[j])), static_cast<long double>(p)));
    }
  }
  const int total_arcs = static_cast<int>(all_arcs.size());
  const int tree_size = n + m - 1;
  long double best = std::numeric_limits<long double>::infinity();

  // Enumerate arc subsets of tree size via bitmask; filter to spanning trees.
  std::vector<std::pair<int, int>> arcs;
  std::vector<double> flows;
  for (std::uint32_t mask = 0; mask < (1u << total_arcs); ++mask) {
    if (std::popcount(mask) != tree_size) continue;
    arcs.clear();
    for (int a = 0; a < total_arcs; ++a) {
      if (mask & (1u << a)) arcs.push_back(all_arcs[a]);
    }
    // Spanning-tree check via union-find.
    std::vector<int> parent(n + m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool acyclic = true;
    for (const auto& [u, v] : arcs) {
      const int ru = find(u), rv = find(v);
      if (ru == rv) {
        acyclic = false;
        break;
      }
      parent[ru] = rv;
    }
    if (!acyclic) continue;  // n+m-1 acyclic arcs on n+m nodes => spanning tree
    if (!solve_tree_flows(n, m, arcs, supply, demand, flows)) continue;
    long double cost = 0.0;
    int pos = 0;
    for (int a = 0; a < total_arcs; ++a) {
      if (mask & (1u << a)) {
        cost += static_cast<long double>(flows[pos]) * arc_cost[a];
        ++pos;
      }
    }
    if (cost < best) best = cost;
  }
  return static_cast<double>(std::pow(best, static_cast<long double>(1.0) / p));
}

BottleneckResult bottleneck_bruteforce(const FiniteMetricSpace& space,
                                       const std::vector<int>& xs,
                                       const std::vector<int>& ys) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw InvalidInput("bottleneck point lists must be nonempty and equal length");
  }
  if (xs.size() > 7) {
    std::ostringstream msg;
    msg << "list length " << xs.size() << " exceeds the 7-point oracle budget";
    throw ResourceError(msg.str());
  }
  for (int i : xs) {
    if (i < 0 || i >= space.size()) throw InvalidInput("xs index out of range");
  }
  for (int i : ys) {
    if (i < 0 || i >= space.size()) throw InvalidInput("ys index out of range");
  }
  const int n = static_cast<int>(xs.size());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  BottleneckResult best;
  best.value = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, space.dist(xs[i], ys[perm[i]]));
    }
    if (worst < best.value) {
      best.value = worst;
      best.perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

double lp_subset_oracle(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  require_shared_space(mu, nu);
  const FiniteMetricSpace& space = *mu.space();
  const int n = space.size();
  if (n > 5) {
    std::ostringstream msg;
    msg << "space size " << n << " exceeds the 5-point oracle budget";
    throw ResourceError(msg.str());
  }

  // Candidate radii: every distance value plus a uniform grid.  Radii beyond
  // min(1, diameter) + one step always satisfy the definition, so the grid
  // stops there.
  constexpr double kStep = 1e-4;
  const double reach = std::min(1.0, space.diameter()) + kStep;
  std::vector<double> candidates;
  for (double r = 0.0; r <= reach; r += kStep) candidates.push_back(r);
  candidates.push_back(1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) candidates.push_back(space.dist(i, j));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // One-sided check of the definition at radius r.
  auto side_holds = [&space, n](const ProbabilityMeasure& a, const ProbabilityMeasure& b,
                                double r) {
    for (std::uint32_t subset = 1; subset < (1u << n); ++subset) {
      double a_mass = 0.0;
      for (int i = 0; i < n; ++i) {
        if (subset & (1u << i)) a_mass += a.weight(i);
      }
      // b-mass of the union of open r-balls around the subset.
      double b_ball = 0.0;
      for (int y = 0; y < n; ++y) {
        bool inside = false;
        for (int x = 0; x < n && !inside; ++x) {
          if ((subset & (1u << x)) && space.dist(y, x) < r) inside = true;
        }
        if (inside) b_ball += b.weight(y);
      }
      if (a_mass > b_ball + r + 1e-15) return false;
    }
    return true;
  };
  auto feasible = [&](double r) {
    return side_holds(mu, nu, r) && side_holds(nu, mu, r);
  };

  // Feasibility is monotone in r (larger balls, larger slack): binary-search
  // the smallest passing candidate.
  int lo = 0, hi = static_cast<int>(candidates.size()) - 1;
  if (!feasible(candidates[hi])) {
    throw CheckFailure("no candidate radius satisfied the definition; grid too short");
  }
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (feasible(candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[static_cast<std::size_t>(lo)];
}

}  // namespace mmd

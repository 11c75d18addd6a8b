#include "mmdist/transport.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "detail/bipartite_match.hpp"
#include "detail/dense_lp.hpp"
#include "detail/max_flow.hpp"
#include "detail/transport_solver.hpp"
#include "mmdist/errors.hpp"

namespace mmd {
namespace {

constexpr double kMassTol = 1e-9;  // feasibility slack on routed mass

void require_shared_space(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  if (!mu.space()->same_metric_as(*nu.space())) {
    throw InvalidInput("measures must live on the same metric space");
  }
}

// Support-restricted view of a measure pair.
struct SupportPair {
  std::vector<int> a, b;       // support indices of mu, nu
  std::vector<double> wa, wb;  // matching weights
  double total = 0.0;          // routed mass (total of wa; equals total of wb
                               // up to renormalization rounding)
};

SupportPair supports_of(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  SupportPair s;
  s.a = mu.support();
  s.b = nu.support();
  s.wa.reserve(s.a.size());
  s.wb.reserve(s.b.size());
  for (int i : s.a) {
    s.wa.push_back(mu.weight(i));
    s.total += mu.weight(i);
  }
  for (int j : s.b) s.wb.push_back(nu.weight(j));
  return s;
}

bool same_weights(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  return mu.max_weight_diff(nu) == 0.0;
}

// Exact-match coupling for identical measures: all mass stays in place.
Coupling diagonal_coupling(const ProbabilityMeasure& mu) {
  std::vector<int> sup = mu.support();
  const std::size_t n = sup.size();
  std::vector<double> plan(n * n, 0.0);
  for (std::size_t k = 0; k < n; ++k) plan[k * n + k] = mu.weight(sup[k]);
  return Coupling{mu, mu, sup, sup, std::move(plan)};
}

// Largest mass routable from mu's support to nu's support using only pairs
// with distance <= r.  Optionally captures the attaining plan.
double feasible_mass(const SupportPair& s, const FiniteMetricSpace& space, double r,
                     std::vector<double>* plan_out) {
  const int na = static_cast<int>(s.a.size());
  const int nb = static_cast<int>(s.b.size());
  // Nodes: 0 = source, 1..na = mu side, na+1..na+nb = nu side, last = sink.
  detail::MaxFlow net(na + nb + 2);
  const int src = 0, sink = na + nb + 1;
  for (int i = 0; i < na; ++i) net.add_edge(src, 1 + i, s.wa[i]);
  std::vector<int> arc_id;  // ids of the bipartite arcs, row-major
  if (plan_out) arc_id.assign(static_cast<std::size_t>(na) * nb, -1);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      if (space.dist(s.a[i], s.b[j]) <= r) {
        const int id = net.add_edge(1 + i, 1 + na + j, 2.0);
        if (plan_out) arc_id[static_cast<std::size_t>(i) * nb + j] = id;
      }
    }
  }
  for (int j = 0; j < nb; ++j) net.add_edge(1 + na + j, sink, s.wb[j]);
  const double flow = net.run(src, sink);
  if (plan_out) {
    plan_out->assign(static_cast<std::size_t>(na) * nb, 0.0);
    for (std::size_t k = 0; k < arc_id.size(); ++k) {
      if (arc_id[k] >= 0) (*plan_out)[k] = net.flow_on(arc_id[k]);
    }
  }
  return flow;
}

// Sorted distinct distances between the two supports.
std::vector<double> cross_distances(const SupportPair& s, const FiniteMetricSpace& space) {
  std::vector<double> vals;
  vals.reserve(s.a.size() * s.b.size());
  for (int i : s.a) {
    for (int j : s.b) vals.push_back(space.dist(i, j));
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  return vals;
}

}  // namespace

double Coupling::marginal_defect() const {
  const std::size_t nr = row_points.size();
  const std::size_t nc = col_points.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < nr; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < nc; ++j) sum += plan[i * nc + j];
    worst = std::max(worst, std::abs(sum - source.weight(row_points[i])));
  }
  for (std::size_t j = 0; j < nc; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < nr; ++i) sum += plan[i * nc + j];
    worst = std::max(worst, std::abs(sum - target.weight(col_points[j])));
  }
  return worst;
}

double Coupling::mass_above(double r) const {
  const FiniteMetricSpace& space = *source.space();
  const std::size_t nc = col_points.size();
  double mass = 0.0;
  for (std::size_t i = 0; i < row_points.size(); ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      if (space.dist(row_points[i], col_points[j]) > r) mass += plan[i * nc + j];
    }
  }
  return mass;
}

double Coupling::max_supported_distance(double mass_floor) const {
  const FiniteMetricSpace& space = *source.space();
  const std::size_t nc = col_points.size();
  double worst = 0.0;
  for (std::size_t i = 0; i < row_points.size(); ++i) {
    for (std::size_t j = 0; j < nc; ++j) {
      if (plan[i * nc + j] > mass_floor) {
        worst = std::max(worst, space.dist(row_points[i], col_points[j]));
      }
    }
  }
  return worst;
}

TransportResult wasserstein_p(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                              double p) {
  require_shared_space(mu, nu);
  if (std::isnan(p) || std::isinf(p)) {
    throw InvalidInput("order p must be finite; use wasserstein_inf for the limit");
  }
  if (p < 1.0) throw InvalidInput("order p must be at least 1");
  p = std::min(p, 64.0);  // overflow guard; see header

  const FiniteMetricSpace& space = *mu.space();
  if (same_weights(mu, nu)) return {0.0, diagonal_coupling(mu)};

  SupportPair s = supports_of(mu, nu);
  const int na = static_cast<int>(s.a.size());
  const int nb = static_cast<int>(s.b.size());

  if (na == 1 && nb == 1) {  // point mass to point mass: unique coupling
    const double d = space.dist(s.a[0], s.b[0]);
    return {d, Coupling{mu, nu, std::move(s.a), std::move(s.b), {s.total}}};
  }

  // Costs are (d/s)^p for a normalization scale s, and the value is
  // s * cost^(1/p).  Two precision hazards drive the design:
  //
  //   * The solver's cost error is absolute, and the p-th root turns an
  //     absolute error delta into delta^(1/p) — at p = 64 even 1e-12
  //     becomes 0.65, swamping any value much smaller than the scale.
  //     Renormalizing with the running value estimate keeps the optimal
  //     cost near 1, making the error relative (the root then divides it
  //     by p).  The scale only decreases and never drops below the true
  //     value, so the iteration converges geometrically.
  //
  //   * (d/s)^p spans an astronomical dynamic range once s shrinks below
  //     the largest distances, and the solver's tolerance scales with the
  //     largest cost.  Arcs that expensive are never part of an optimal
  //     plan (mass forced across them would be visible in the value), so
  //     normalized costs are capped at 1e6.
  const std::vector<double> dist = [&] {
    std::vector<double> d(static_cast<std::size_t>(na) * nb);
    for (int i = 0; i < na; ++i) {
      for (int j = 0; j < nb; ++j) {
        d[static_cast<std::size_t>(i) * nb + j] = space.dist(s.a[i], s.b[j]);
      }
    }
    return d;
  }();
  const double diam = space.diameter() > 0.0 ? space.diameter() : 1.0;
  const double ratio_cap = std::pow(1e6, 1.0 / p);
  const double scale_floor = diam * 1e-13;  // resolution safety net
  double scale = diam;
  double value = 0.0;
  std::vector<double> plan;
  std::vector<double> cost(dist.size());
  for (int round = 0; round < 200; ++round) {
    double max_cost = 0.0;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      cost[k] = std::pow(std::min(dist[k] / scale, ratio_cap), p);
      max_cost = std::max(max_cost, cost[k]);
    }
    detail::TransportSolution sol = detail::solve_transportation(na, nb, cost, s.wa, s.wb);
    const double c = std::max(0.0, sol.cost);
    value = scale * std::pow(c, 1.0 / p);
    plan = std::move(sol.flow);
    if (p <= 1.0 + 1e-12) break;  // value is linear in the cost: no amplification
    if (c > 0.0) {
      // Estimated absolute value error in units of the scale:
      // d(value)/d(cost) * cost-error, with the cost error tracking the
      // solver tolerance for this round's cost range.
      const double junk = 1e-13 * (1.0 + max_cost);
      const double err = std::pow(c, 1.0 / p - 1.0) / p * junk;
      if (err <= 2.5e-10) break;
      if (c >= 0.5 && c <= 2.0) break;  // well-scaled: error is junk/p
    }
    // Shrink toward the value estimate.  cost == 0 means every arc the plan
    // uses had (d/s)^p underflow, i.e. the value is below s * exp(-744/p);
    // jump just above that resolution bound.
    double next = (c > 0.0) ? value : scale * 10.0 * std::exp(-744.0 / p);
    next = std::max(next, scale_floor);
    if (next >= scale * (1.0 - 1e-12)) break;  // progress stalled
    scale = next;
  }
  return {value, Coupling{mu, nu, std::move(s.a), std::move(s.b), std::move(plan)}};
}

DualPotentialResult wasserstein_1_dual(const ProbabilityMeasure& mu,
                                       const ProbabilityMeasure& nu) {
  require_shared_space(mu, nu);
  const FiniteMetricSpace& space = *mu.space();
  const int n = space.size();
  constexpr int kMaxDualPoints = 32;  // n(n-1) constraint rows; keep the tableau small
  if (n > kMaxDualPoints) {
    throw ResourceError("dual solver supports spaces up to " + std::to_string(kMaxDualPoints) +
                        " points; use the primal order-1 solve instead");
  }

  // Variables g_i >= 0; constraints g_i - g_j <= d_ij for all i != j.
  // The objective sum (mu_i - nu_i) g_i is shift-invariant because the
  // weight difference sums to zero, so the g >= 0 restriction is harmless.
  const int rows = n * (n - 1);
  std::vector<double> a(static_cast<std::size_t>(rows) * n, 0.0);
  std::vector<double> b(rows, 0.0);
  std::vector<double> c(n, 0.0);
  int r = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      a[static_cast<std::size_t>(r) * n + i] = 1.0;
      a[static_cast<std::size_t>(r) * n + j] = -1.0;
      b[r] = space.dist(i, j);
      ++r;
    }
  }
  for (int i = 0; i < n; ++i) c[i] = mu.weight(i) - nu.weight(i);

  detail::LpSolution sol = detail::solve_lp_max(rows, n, a, b, c);
  DualPotentialResult out;
  out.value = std::max(0.0, sol.value);
  out.potential = std::move(sol.x);
  return out;
}

TransportResult wasserstein_inf(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  require_shared_space(mu, nu);
  const FiniteMetricSpace& space = *mu.space();
  if (same_weights(mu, nu)) return {0.0, diagonal_coupling(mu)};

  SupportPair s = supports_of(mu, nu);
  const std::vector<double> vals = cross_distances(s, space);

  // Smallest distance value whose threshold graph routes all the mass.
  // Feasibility is monotone in the threshold, and the full graph (largest
  // value) always routes everything, so the search is well defined.
  int lo = 0, hi = static_cast<int>(vals.size()) - 1;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    const double flow = feasible_mass(s, space, vals[mid], nullptr);
    if (s.total - flow <= kMassTol) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }

  std::vector<double> plan;
  feasible_mass(s, space, vals[lo], &plan);
  return {vals[lo], Coupling{mu, nu, std::move(s.a), std::move(s.b), std::move(plan)}};
}

MatchingResult bottleneck_match(const FiniteMetricSpace& space, const std::vector<int>& xs,
                                const std::vector<int>& ys) {
  if (xs.empty() || xs.size() != ys.size()) {
    throw InvalidInput("bottleneck matching needs two nonempty point lists of equal length");
  }
  const int n = static_cast<int>(xs.size());
  for (int v : xs) space.check_point(v);
  for (int v : ys) space.check_point(v);

  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) vals.push_back(space.dist(xs[i], ys[j]));
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());

  auto matching_at = [&](double r, std::vector<int>& match_left) {
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (space.dist(xs[i], ys[j]) <= r) adj[i].push_back(j);
      }
    }
    return detail::max_bipartite_matching(adj, n, match_left) == n;
  };

  // Smallest threshold admitting a perfect matching; the full graph allows
  // the identity pairing, so the top candidate is always feasible.
  int lo = 0, hi = static_cast<int>(vals.size()) - 1;
  std::vector<int> match_left;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (matching_at(vals[mid], match_left)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  matching_at(vals[lo], match_left);

  MatchingResult out;
  out.permutation = std::move(match_left);
  out.value = 0.0;
  for (int i = 0; i < n; ++i) {
    out.value = std::max(out.value, space.dist(xs[i], ys[out.permutation[i]]));
  }
  return out;
}

double levy_prokhorov(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu) {
  require_shared_space(mu, nu);
  const FiniteMetricSpace& space = *mu.space();
  if (same_weights(mu, nu)) return 0.0;

  SupportPair s = supports_of(mu, nu);
  const std::vector<double> vals = cross_distances(s, space);

  // leak(t) = mass any coupling must place on pairs with d > t; it is a
  // nonincreasing step function constant between distance values.  On the
  // interval starting at d_k the infimum condition leak <= r is first met
  // at max(d_k, leak(d_k)), so the answer is the minimum of those
  // candidates.  r = 1 is always feasible (total mass is 1), which also
  // covers the interval below the smallest distance.
  double best = 1.0;
  for (double t : vals) {
    if (t >= best) break;  // candidates only grow from here
    const double leak = std::max(0.0, s.total - feasible_mass(s, space, t, nullptr));
    best = std::min(best, std::max(t, leak));
    if (leak <= kMassTol) break;  // larger thresholds cannot improve on t
  }
  return best;
}

double ModulusFunction::operator()(double x) const {
  if (x < 0.0) throw InvalidInput("modulus argument must be nonnegative");
  if (std::isinf(exponent_p) || exponent_p == 1.0) return x;
  return std::pow(diam, 1.0 - 1.0 / exponent_p) * std::pow(x, 1.0 / exponent_p);
}

ModulusFunction quasiconvexity_modulus(double p, double diam) {
  if (!(diam > 0.0) || std::isnan(diam) || std::isinf(diam)) {
    throw InvalidInput("modulus needs a positive finite diameter");
  }
  if (std::isnan(p) || p < 1.0) throw InvalidInput("order p must be at least 1 (or infinity)");
  return ModulusFunction{p, diam};
}

double evaluate_distance(const StageDistance& d, const ProbabilityMeasure& mu,
                         const ProbabilityMeasure& nu) {
  switch (d.kind) {
    case DistanceKind::kWasserstein:
      return wasserstein_p(mu, nu, d.p).value;
    case DistanceKind::kWassersteinInf:
      return wasserstein_inf(mu, nu).value;
    case DistanceKind::kLevyProkhorov:
      return levy_prokhorov(mu, nu);
  }
  throw InvalidInput("unknown distance kind");
}

ModulusFunction quasiconvexity_modulus(const StageDistance& d, double diam) {
  switch (d.kind) {
    case DistanceKind::kWasserstein:
      return quasiconvexity_modulus(d.p, diam);
    case DistanceKind::kWassersteinInf:
    case DistanceKind::kLevyProkhorov:
      return quasiconvexity_modulus(std::numeric_limits<double>::infinity(), diam);
  }
  throw InvalidInput("unknown distance kind");
}

}  // namespace mmd

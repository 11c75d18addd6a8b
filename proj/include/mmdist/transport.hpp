// transport.hpp — distances between probability measures on a shared
// finite metric space:
//
//   * wasserstein_p      — order-p Wasserstein distance, exact primal
//                          transportation solve, coupling witness
//   * wasserstein_1_dual — order-1 distance through Lipschitz potentials,
//                          potential witness
//   * wasserstein_inf    — infinity-order Wasserstein distance via
//                          threshold feasibility, coupling witness
//   * bottleneck_match   — min-max perfect matching of two point lists
//   * levy_prokhorov     — Levy-Prokhorov distance in coupling form
//
// All solvers are exact combinatorial methods (network simplex, max-flow,
// bipartite matching, dense simplex); no regularization and no sampling.
// Results are deterministic for fixed inputs.  Witness plans are not
// unique: downstream checks should verify feasibility and objective value,
// never equality of plans.
#pragma once

#include <vector>

#include "mmdist/measure.hpp"
#include "mmdist/metric_space.hpp"

namespace mmd {

// A transport plan between two measures on one space.  Rows and columns
// are restricted to the measures' supports; `plan` is row-major with
// shape row_points.size() x col_points.size().
struct Coupling {
  ProbabilityMeasure source;
  ProbabilityMeasure target;
  std::vector<int> row_points;  // space indices, one per plan row
  std::vector<int> col_points;  // space indices, one per plan column
  std::vector<double> plan;     // nonnegative joint masses

  // Largest deviation between a row (column) sum of the plan and the
  // corresponding source (target) weight.  Valid couplings keep this
  // below 1e-9.
  double marginal_defect() const;

  // Total plan mass on pairs with distance strictly greater than r.
  double mass_above(double r) const;

  // Largest distance carrying positive mass (above the given floor).
  double max_supported_distance(double mass_floor = 1e-12) const;
};

struct TransportResult {
  double value = 0.0;
  Coupling witness;
};

struct DualPotentialResult {
  double value = 0.0;
  std::vector<double> potential;  // one entry per point of the space
};

struct MatchingResult {
  double value = 0.0;
  std::vector<int> permutation;  // permutation[i] = index into ys matched to xs[i]
};

// Order-p Wasserstein distance, p in [1, 64]; larger finite p is clamped
// to 64 (cost overflow guard — costs are normalized by the diameter before
// powering and rescaled after).  Solved exactly as a balanced
// transportation problem on the support of the two measures.
TransportResult wasserstein_p(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu,
                              double p);

// Order-1 distance through its dual: maximize sum f*(mu-nu) over 1-Lipschitz
// potentials f, as a linear program with all pairwise Lipschitz constraints.
// Supports spaces up to 32 points; use wasserstein_p(mu, nu, 1) beyond that.
DualPotentialResult wasserstein_1_dual(const ProbabilityMeasure& mu,
                                       const ProbabilityMeasure& nu);

// Infinity-order Wasserstein distance: the smallest r among the distinct
// support-to-support distances such that some coupling lives entirely on
// pairs with d <= r.  Feasibility is decided by bipartite max-flow; the
// optimum is always attained at a matrix entry on finite spaces.
TransportResult wasserstein_inf(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);

// Min over permutations of the maximum matched distance between two
// equal-length point lists.  Binary search over distance thresholds with
// bipartite perfect-matching feasibility.
MatchingResult bottleneck_match(const FiniteMetricSpace& space, const std::vector<int>& xs,
                                const std::vector<int>& ys);

// Levy-Prokhorov distance in coupling form:
//   inf { r > 0 : some coupling puts mass at most r on pairs with d > r }.
// Computed exactly as the minimum over the distinct distance values d_k of
// max(d_k, leak(d_k)), where leak(t) is the smallest mass any coupling
// must place on pairs with d > t (via max-flow).  Always <= 1.
double levy_prokhorov(const ProbabilityMeasure& mu, const ProbabilityMeasure& nu);

// Modulus of quasiconvexity h for the order-p distance on a space of the
// given diameter: h(x) = diam^(1-1/p) * x^(1/p).  Identity for p = 1 and
// p = infinity; the Levy-Prokhorov and infinity-order distances also use
// the identity.  h(0) = 0 and h is increasing.
struct ModulusFunction {
  double exponent_p = 1.0;  // infinity means identity
  double diam = 1.0;
  double operator()(double x) const;
};

ModulusFunction quasiconvexity_modulus(double p, double diam);

// Distance selector used where a family of measure distances parametrizes
// a construction (e.g. per-stage distances of an inductive system).
enum class DistanceKind {
  kWasserstein,     // order-p, p finite
  kWassersteinInf,  // order-infinity
  kLevyProkhorov,
};

struct StageDistance {
  DistanceKind kind = DistanceKind::kWasserstein;
  double p = 1.0;  // order when kind == kWasserstein
};

double evaluate_distance(const StageDistance& d, const ProbabilityMeasure& mu,
                         const ProbabilityMeasure& nu);

ModulusFunction quasiconvexity_modulus(const StageDistance& d, double diam);

}  // namespace mmd

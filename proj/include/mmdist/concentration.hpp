// concentration.hpp — Monte Carlo concentration-of-measure experiments:
//
//   * variance_experiment   — variance of 1-Lipschitz observables on the
//                             round unit sphere S^(k-1), checked against
//                             the dimensional bound 1/(k-2)
//   * sanov_experiment      — tail probability of the Wasserstein-1
//                             deviation of an n-sample empirical measure
//                             from its base measure on a finite metric
//                             space, checked against exp(-n eps^2 / diam^2)
//   * median_concentration  — empirical tails of |f - median(f)| on the
//                             sphere over a grid of deviation levels, with
//                             a fitted exponential decay rate (no constant
//                             is asserted)
//
// All experiments derive one random stream per trial from the master seed
// (sub_seed(seed, trial)), so results replay bit-identically for a fixed
// seed and do not depend on the order in which trials are executed.  Trials
// may run on up to `jobs` worker threads; every trial writes only its own
// slot of a pre-sized buffer and aggregation is a deterministic fold in
// trial-index order afterwards, so the thread count never changes a result.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmdist/measure.hpp"
#include "mmdist/metric_space.hpp"

namespace mmd {

// Observables for the sphere experiments.  The set is closed by design:
// every kind is 1-Lipschitz with respect to the geodesic distance by
// construction (|x_i - y_i| <= |x - y|_2 <= geodesic distance certifies
// coordinates; the triangle inequality certifies distance functions;
// constants are trivial), so no numerical Lipschitz check is needed and
// functions serialize exactly for replay.
struct TestFunction {
  enum class Kind { kCoordinate, kDistanceToPoint, kConstant };
  Kind kind = Kind::kCoordinate;
  int axis = 0;               // kCoordinate: which coordinate to read
  std::vector<double> point;  // kDistanceToPoint: unit vector in R^k
  double value = 0.0;         // kConstant
};

TestFunction coordinate_function(int axis);
TestFunction distance_function(std::vector<double> point);
TestFunction constant_function(double value);

// Default observable set for dimension k: the first and last coordinates,
// the geodesic distance to the first standard basis vector, and the
// geodesic distance to the normalized all-ones vector.
std::vector<TestFunction> builtin_test_functions(int k);

// Value of the observable at a unit vector x in R^k.  Throws InvalidInput
// when x and the function disagree on the dimension.
double evaluate_test_function(const TestFunction& f, const std::vector<double>& x);

// Short label for reports: "coordinate_3", "distance_to_point", "constant".
std::string test_function_label(const TestFunction& f);

// Outcome of one experiment.  Field use by experiment kind:
//
//   variance — statistics / stderrs hold one variance estimate and its
//     standard error per test function; bound = 1/(k-2); pass means every
//     function satisfied estimate <= bound + 3*stderr.
//     empirical_probability and decay_rate are unused (zero).
//
//   sanov — statistics holds the per-trial Wasserstein-1 values;
//     empirical_probability is the fraction of trials at or above eps;
//     stderrs holds a single entry, the binomial standard error of that
//     fraction; bound = exp(-n eps^2 / diam^2); pass means
//     empirical_probability <= bound + 3*stderr.  decay_rate is unused.
//
//   median — statistics / stderrs hold the empirical tail and its binomial
//     standard error per grid level; decay_rate is the fitted exponent of
//     the tails against k*eps^2 (zero when fewer than two levels have
//     positive tails); nothing is asserted, so pass is always true and
//     bound / empirical_probability are unused.
//
// warning is empty unless the experiment proceeded under a degenerate
// input (currently: a base measure with zero-weight points, which the
// sampler can never hit).
struct TrialResult {
  std::vector<double> statistics;
  std::vector<double> stderrs;
  double empirical_probability = 0.0;
  double bound = 0.0;
  double decay_rate = 0.0;
  bool pass = true;
  std::string warning;
};

// Upper limit on n * trials for sanov_experiment.
inline constexpr std::int64_t kSampleBudget = 100'000'000;

// Monte Carlo variance of each observable over `trials` uniform samples on
// S^(k-1); all observables see the same sample stream.  A function passes
// when its sample variance is at most 1/(k-2) + 3 standard errors.
// Throws InvalidInput for k < 3 (the bound degenerates), trials < 1,
// jobs < 1, an empty function list, or an observable inconsistent with
// dimension k.
TrialResult variance_experiment(int k, const std::vector<TestFunction>& functions,
                                std::int64_t trials, std::uint64_t seed, int jobs = 1);

// Estimates P(W_1(mu_n, mu) >= eps) over `trials` independent n-samples
// from mu, with the Wasserstein-1 statistic computed by the exact
// transport solver.  Passes when the empirical probability is at most
// exp(-n eps^2 / diam^2) + 3 binomial standard errors.  A base measure
// with zero-weight points is allowed but reported through `warning`.
// Throws InvalidInput for a null space, a measure on a different space,
// n < 1, eps <= 0 or non-finite, trials < 1, or jobs < 1; throws
// ResourceError when n * trials exceeds kSampleBudget.
TrialResult sanov_experiment(const SpacePtr& space, const ProbabilityMeasure& mu,
                             std::int64_t n, double eps, std::int64_t trials,
                             std::uint64_t seed, int jobs = 1);

// Empirical tails P(|f - M| > eps) on S^(k-1) for each level of the grid,
// where M is the empirical median of f over the same `trials` samples.
// Tails are nonincreasing along the grid by nestedness.  The decay rate is
// fitted by least squares of log(tail) against k*eps^2 over the levels
// with positive tails and reported, never asserted.  Throws InvalidInput
// for k < 3, trials < 1, jobs < 1, an observable inconsistent with k, or
// a grid that is empty, non-finite, nonpositive, or not strictly
// increasing.
TrialResult median_concentration(int k, const TestFunction& f,
                                 const std::vector<double>& eps_grid,
                                 std::int64_t trials, std::uint64_t seed, int jobs = 1);

}  // namespace mmd

#include "mmdist/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>

#include "mmdist/errors.hpp"
#include "mmdist/generators.hpp"
#include "mmdist/parallel.hpp"
#include "mmdist/rng.hpp"
#include "mmdist/transport.hpp"

namespace mmd {
namespace {

constexpr double kUnitNormTol = 1e-9;

std::vector<double> sphere_point(Rng& rng, int k) {
  std::vector<double> x(static_cast<std::size_t>(k));
  while (true) {
    double norm2 = 0.0;
    for (double& c : x) {
      c = rng.gaussian();
      norm2 += c * c;
    }
    if (norm2 > 0.0 && std::isfinite(norm2)) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (double& c : x) c *= inv;
      return x;
    }
  }
}

void require_dimension(int k) {
  if (k < 3) {
    throw InvalidInput("sphere dimension must be at least 3, got " + std::to_string(k) +
                       " (the variance bound 1/(k-2) degenerates below 3)");
  }
}

void require_trials(std::int64_t trials) {
  if (trials < 1) throw InvalidInput("trial count must be positive, got " + std::to_string(trials));
}

unsigned require_jobs(int jobs) {
  if (jobs < 1) throw InvalidInput("job count must be positive, got " + std::to_string(jobs));
  return static_cast<unsigned>(jobs);
}

void require_test_function(const TestFunction& f, int k) {
  switch (f.kind) {
    case TestFunction::Kind::kCoordinate:
      if (f.axis < 0 || f.axis >= k) {
        throw InvalidInput("coordinate observable reads axis " + std::to_string(f.axis) +
                           " outside dimension " + std::to_string(k));
      }
      return;
    case TestFunction::Kind::kDistanceToPoint: {
      if (static_cast<int>(f.point.size()) != k) {
        throw InvalidInput("distance observable anchors a point of dimension " +
                           std::to_string(f.point.size()) + ", expected " + std::to_string(k));
      }
      double norm2 = 0.0;
      for (double c : f.point) {
        if (!std::isfinite(c)) throw InvalidInput("distance observable anchor has a non-finite coordinate");
        norm2 += c * c;
      }
      if (std::abs(std::sqrt(norm2) - 1.0) > kUnitNormTol) {
        throw InvalidInput("distance observable anchor must lie on the unit sphere (norm " +
                           std::to_string(std::sqrt(norm2)) + ")");
      }
      return;
    }
    case TestFunction::Kind::kConstant:
      if (!std::isfinite(f.value)) throw InvalidInput("constant observable value must be finite");
      return;
  }
  throw InvalidInput("unknown observable kind");
}

// Sample mean, then unbiased variance and the centered fourth moment in a
// second pass; the standard error of the variance estimate is
// sqrt((m4 - var^2) / n).
struct VarianceSummary {
  double variance = 0.0;
  double stderr_of_variance = 0.0;
};

VarianceSummary summarize_variance(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double sum2 = 0.0;
  double sum4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    const double d2 = d * d;
    sum2 += d2;
    sum4 += d2 * d2;
  }
  VarianceSummary out;
  out.variance = values.size() > 1 ? sum2 / (n - 1.0) : 0.0;
  const double m4 = sum4 / n;
  out.stderr_of_variance = std::sqrt(std::max(0.0, m4 - out.variance * out.variance) / n);
  return out;
}

double binomial_stderr(double p, std::int64_t trials) {
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(trials));
}

}  // namespace

TestFunction coordinate_function(int axis) {
  TestFunction f;
  f.kind = TestFunction::Kind::kCoordinate;
  f.axis = axis;
  return f;
}

TestFunction distance_function(std::vector<double> point) {
  TestFunction f;
  f.kind = TestFunction::Kind::kDistanceToPoint;
  f.point = std::move(point);
  return f;
}

TestFunction constant_function(double value) {
  TestFunction f;
  f.kind = TestFunction::Kind::kConstant;
  f.value = value;
  return f;
}

std::vector<TestFunction> builtin_test_functions(int k) {
  require_dimension(k);
  std::vector<double> north(static_cast<std::size_t>(k), 0.0);
  north[0] = 1.0;
  std::vector<double> diagonal(static_cast<std::size_t>(k), 1.0 / std::sqrt(static_cast<double>(k)));
  return {coordinate_function(0), coordinate_function(k - 1),
          distance_function(std::move(north)), distance_function(std::move(diagonal))};
}

double evaluate_test_function(const TestFunction& f, const std::vector<double>& x) {
  require_test_function(f, static_cast<int>(x.size()));
  switch (f.kind) {
    case TestFunction::Kind::kCoordinate:
      return x[static_cast<std::size_t>(f.axis)];
    case TestFunction::Kind::kDistanceToPoint:
      return arc_distance(x, f.point);
    case TestFunction::Kind::kConstant:
      return f.value;
  }
  throw InvalidInput("unknown observable kind");
}

std::string test_function_label(const TestFunction& f) {
  switch (f.kind) {
    case TestFunction::Kind::kCoordinate:
      return "coordinate_" + std::to_string(f.axis);
    case TestFunction::Kind::kDistanceToPoint:
      return "distance_to_point";
    case TestFunction::Kind::kConstant:
      return "constant";
  }
  return "unknown";
}

TrialResult variance_experiment(int k, const std::vector<TestFunction>& functions,
                                std::int64_t trials, std::uint64_t seed, int jobs) {
  require_dimension(k);
  require_trials(trials);
  const unsigned workers = require_jobs(jobs);
  if (functions.empty()) throw InvalidInput("variance experiment needs at least one observable");
  for (const auto& f : functions) require_test_function(f, k);

  std::vector<std::vector<double>> values(functions.size());
  for (auto& column : values) column.resize(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    const std::vector<double> x = sphere_point(rng, k);
    for (std::size_t j = 0; j < functions.size(); ++j) {
      values[j][t] = evaluate_test_function(functions[j], x);
    }
  });

  TrialResult result;
  result.bound = 1.0 / static_cast<double>(k - 2);
  for (const auto& column : values) {
    const VarianceSummary summary = summarize_variance(column);
    result.statistics.push_back(summary.variance);
    result.stderrs.push_back(summary.stderr_of_variance);
    if (summary.variance > result.bound + 3.0 * summary.stderr_of_variance) result.pass = false;
  }
  return result;
}

TrialResult sanov_experiment(const SpacePtr& space, const ProbabilityMeasure& mu,
                             std::int64_t n, double eps, std::int64_t trials,
                             std::uint64_t seed, int jobs) {
  if (!space) throw InvalidInput("deviation experiment needs a metric space");
  if (!mu.space()->same_metric_as(*space)) {
    throw InvalidInput("base measure does not live on the given metric space");
  }
  if (n < 1) throw InvalidInput("sample size must be positive, got " + std::to_string(n));
  if (!std::isfinite(eps) || eps <= 0.0) throw InvalidInput("deviation level must be positive and finite");
  require_trials(trials);
  const unsigned workers = require_jobs(jobs);
  if (n > kSampleBudget / trials) {
    throw ResourceError("sample budget exceeded: " + std::to_string(n) + " x " +
                        std::to_string(trials) + " draws, limit " + std::to_string(kSampleBudget));
  }

  TrialResult result;
  for (int i = 0; i < space->size(); ++i) {
    if (mu.weight(i) == 0.0) {
      result.warning = "base measure is not faithful: point " + std::to_string(i) +
                       " has weight 0 and can never be sampled";
      break;
    }
  }

  const double diam = space->diameter();
  result.bound = std::exp(-static_cast<double>(n) * eps * eps / (diam * diam));

  std::vector<double> cdf(mu.weights().begin(), mu.weights().end());
  for (std::size_t i = 1; i < cdf.size(); ++i) cdf[i] += cdf[i - 1];

  const StageDistance w1{DistanceKind::kWasserstein, 1.0};
  result.statistics.resize(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<int> sample(static_cast<std::size_t>(n));
    for (auto& idx : sample) {
      const double u = rng.uniform();
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      idx = static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                      static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    }
    result.statistics[t] = evaluate_distance(w1, empirical(space, sample), mu);
  });
  std::int64_t hits = 0;
  for (double w : result.statistics) {
    if (w >= eps) ++hits;
  }

  result.empirical_probability = static_cast<double>(hits) / static_cast<double>(trials);
  const double err = binomial_stderr(result.empirical_probability, trials);
  result.stderrs.push_back(err);
  result.pass = result.empirical_probability <= result.bound + 3.0 * err;
  return result;
}

TrialResult median_concentration(int k, const TestFunction& f,
                                 const std::vector<double>& eps_grid,
                                 std::int64_t trials, std::uint64_t seed, int jobs) {
  require_dimension(k);
  require_trials(trials);
  const unsigned workers = require_jobs(jobs);
  require_test_function(f, k);
  if (eps_grid.empty()) throw InvalidInput("median experiment needs at least one deviation level");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!std::isfinite(eps_grid[i]) || eps_grid[i] <= 0.0) {
      throw InvalidInput("deviation levels must be positive and finite");
    }
    if (i > 0 && eps_grid[i] <= eps_grid[i - 1]) {
      throw InvalidInput("deviation levels must be strictly increasing");
    }
  }

  std::vector<double> values(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t t) {
    Rng rng(sub_seed(seed, static_cast<std::uint64_t>(t)));
    values[t] = evaluate_test_function(f, sphere_point(rng, k));
  });

  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  const double median =
      sorted.size() % 2 == 1 ? sorted[half] : 0.5 * (sorted[half - 1] + sorted[half]);

  TrialResult result;
  for (double eps : eps_grid) {
    std::int64_t exceed = 0;
    for (double v : values) {
      if (std::abs(v - median) > eps) ++exceed;
    }
    const double tail = static_cast<double>(exceed) / static_cast<double>(trials);
    result.statistics.push_back(tail);
    result.stderrs.push_back(binomial_stderr(tail, trials));
  }

  // Least-squares slope of log(tail) against k*eps^2 over positive tails;
  // the reported decay rate is the negated slope.
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (result.statistics[i] > 0.0) {
      xs.push_back(static_cast<double>(k) * eps_grid[i] * eps_grid[i]);
      ys.push_back(std::log(result.statistics[i]));
    }
  }
  if (xs.size() >= 2) {
    const auto m = static_cast<double>(xs.size());
    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mean_x += xs[i];
      mean_y += ys[i];
    }
    mean_x /= m;
    mean_y /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
      sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
    }
    if (sxx > 0.0) result.decay_rate = -sxy / sxx;
  }
  return result;
}

}  // namespace mmd

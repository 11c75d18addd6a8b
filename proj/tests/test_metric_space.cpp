// test_metric_space.cpp — FiniteMetricSpace construction, validation, and
// subspaces.
#include "doctest.h"

#include <limits>

#include "mmdist/errors.hpp"
#include "mmdist/metric_space.hpp"
#include "test_helpers.hpp"

using namespace mmd;
using namespace mmd::testing;

TEST_SUITE_BEGIN("metric_space");

TEST_CASE("smallest metric space validates") {
  const auto space = make_space(2, {0, 1, 1, 0});
  const auto report = validate_metric(*space, 0.0);
  CHECK(report.pass);
  CHECK(report.axiom == MetricAxiom::kNone);
  CHECK(space->diameter() == 1.0);
  CHECK(space->radius() == 0.5);
}

TEST_CASE("asymmetry is reported with indices") {
  const auto space = make_space(2, {0, 1, 2, 0});
  const auto report = validate_metric(*space, 0.0);
  CHECK_FALSE(report.pass);
  CHECK(report.axiom == MetricAxiom::kSymmetry);
  CHECK(report.i == 0);
  CHECK(report.j == 1);
}

TEST_CASE("triangle violation 3 > 1 + 1 is caught") {
  const auto space = make_space(3, {0, 1, 3, 1, 0, 1, 3, 1, 0});
  const auto report = validate_metric(*space, 0.0);
  CHECK_FALSE(report.pass);
  CHECK(report.axiom == MetricAxiom::kTriangle);
  // The violating triple involves points 0, 1, 2 in some scan order.
  CHECK(report.k >= 0);
}

TEST_CASE("nonzero diagonal is caught first") {
  const auto space = make_space(2, {0.5, 1, 1, 0});
  const auto report = validate_metric(*space, 0.0);
  CHECK_FALSE(report.pass);
  CHECK(report.axiom == MetricAxiom::kZeroDiagonal);
  CHECK(report.i == 0);
}

TEST_CASE("zero off-diagonal distance fails positivity") {
  const auto space = make_space(3, {0, 0, 1, 0, 0, 1, 1, 1, 0});
  const auto report = validate_metric(*space, 0.0);
  CHECK_FALSE(report.pass);
  CHECK(report.axiom == MetricAxiom::kPositivity);
}

TEST_CASE("non-finite entries are malformed input, not a failed axiom") {
  const auto space = make_space(2, {0, std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN(), 0});
  CHECK_THROWS_AS(validate_metric(*space, 0.0), InvalidInput);
}

TEST_CASE("matrix shape mismatch is rejected at construction") {
  CHECK_THROWS_AS(FiniteMetricSpace(2, {0, 1, 1}), InvalidInput);
  CHECK_THROWS_AS(FiniteMetricSpace(0, {}), InvalidInput);
}

TEST_CASE("tolerance admits near-violations") {
  // dist(0,2) exceeds the path by 1e-10; passes at tol 1e-9, fails at 0.
  const auto space = make_space(3, {0, 1, 2 + 1e-10, 1, 0, 1, 2 + 1e-10, 1, 0});
  CHECK(validate_metric(*space, 1e-9).pass);
  CHECK_FALSE(validate_metric(*space, 0.0).pass);
}

TEST_CASE("random shifted matrices validate at tol 0") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto space = random_space(rng, 2 + static_cast<int>(rng.below(10)));
    CHECK(validate_metric(*space, 0.0).pass);
  }
}

TEST_CASE("euclidean clouds validate at tiny tolerance") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto space = euclidean_cloud_space(rng, 2 + static_cast<int>(rng.below(10)), 3);
    CHECK(validate_metric(*space, 1e-12).pass);
  }
}

TEST_CASE("subspace restricts the metric, labels, and coords") {
  const FiniteMetricSpace full(3, {0, 1, 2, 1, 0, 1, 2, 1, 0}, {"a", "b", "c"},
                               {{0.0}, {1.0}, {2.0}});
  const auto sub = subspace(full, {2, 0});
  CHECK(sub.size() == 2);
  CHECK(sub.dist(0, 1) == 2.0);
  CHECK(sub.labels() == std::vector<std::string>{"c", "a"});
  CHECK(sub.coords()[0][0] == 2.0);
  CHECK_THROWS_AS(subspace(full, {3}), InvalidInput);
  CHECK_THROWS_AS(subspace(full, {}), InvalidInput);
}

TEST_CASE("digest distinguishes content and ignores identity") {
  const auto a = make_space(2, {0, 1, 1, 0});
  const auto b = make_space(2, {0, 1, 1, 0});
  const auto c = make_space(2, {0, 2, 2, 0});
  CHECK(a->digest() == b->digest());
  CHECK(a->digest() != c->digest());
  CHECK(a->same_metric_as(*b));
  CHECK_FALSE(a->same_metric_as(*c));
}

TEST_SUITE_END();

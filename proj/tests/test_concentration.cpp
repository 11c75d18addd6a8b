#include "mmdist/concentration.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "mmdist/errors.hpp"
#include "mmdist/measure.hpp"
#include "test_helpers.hpp"

using namespace mmd;
using namespace mmd::testing;
using doctest::Approx;

TEST_SUITE("concentration") {

TEST_CASE("sphere variance estimates respect the dimensional bound") {
  // A coordinate of the uniform unit sphere in R^k has variance exactly 1/k.
  const auto ten = variance_experiment(10, {coordinate_function(0)}, 20000, 11);
  REQUIRE(ten.statistics.size() == 1);
  CHECK(ten.statistics[0] == Approx(0.1).epsilon(0.1));
  CHECK(ten.stderrs[0] > 0.0);
  CHECK(ten.stderrs[0] < 0.01);
  CHECK(ten.bound == 0.125);
  CHECK(ten.pass);

  const auto three = variance_experiment(3, {coordinate_function(0)}, 20000, 12);
  CHECK(three.statistics[0] == Approx(1.0 / 3.0).epsilon(0.1));
  CHECK(three.bound == 1.0);
  CHECK(three.pass);

  // Constants ride along on the same sample stream and have zero variance.
  const auto mixed =
      variance_experiment(10, {coordinate_function(0), constant_function(0.7)}, 5000, 13);
  REQUIRE(mixed.statistics.size() == 2);
  CHECK(mixed.statistics[0] == Approx(ten.statistics[0]).epsilon(0.05));
  CHECK(mixed.statistics[1] <= 1e-20);
  CHECK(mixed.pass);

  for (int k : {5, 10, 50}) {
    const auto all = variance_experiment(k, builtin_test_functions(k), 20000, 14);
    REQUIRE(all.statistics.size() == 4);
    for (std::size_t j = 0; j < all.statistics.size(); ++j) {
      CHECK(all.statistics[j] <= all.bound + 3.0 * all.stderrs[j]);
    }
    CHECK(all.pass);
  }
}

TEST_CASE("variance experiment validates its inputs") {
  const std::vector<TestFunction> coord = {coordinate_function(0)};
  CHECK_THROWS_AS(variance_experiment(2, coord, 100, 1), InvalidInput);
  CHECK_THROWS_AS(variance_experiment(5, coord, 0, 1), InvalidInput);
  CHECK_THROWS_AS(variance_experiment(5, {}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(variance_experiment(5, {coordinate_function(5)}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(variance_experiment(5, {coordinate_function(-1)}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(variance_experiment(5, {distance_function({1.0, 0.0})}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(
      variance_experiment(3, {distance_function({2.0, 0.0, 0.0})}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(
      variance_experiment(3, {constant_function(std::nan(""))}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(builtin_test_functions(2), InvalidInput);

  // Observables evaluate only against matching dimensions.
  CHECK_THROWS_AS(evaluate_test_function(coordinate_function(3), {1.0, 0.0}), InvalidInput);
  CHECK(evaluate_test_function(coordinate_function(1), {0.0, 1.0, 0.0}) == 1.0);
  CHECK(evaluate_test_function(distance_function({1.0, 0.0}), {0.0, 1.0}) ==
        Approx(std::acos(0.0)));
  CHECK(test_function_label(coordinate_function(3)) == "coordinate_3");
  CHECK(test_function_label(distance_function({1.0, 0.0})) == "distance_to_point");
  CHECK(test_function_label(constant_function(2.0)) == "constant");
}

TEST_CASE("empirical deviation tails stay under the exponential bound") {
  const auto two = two_point_space(1.0);
  const ProbabilityMeasure uniform(two, {0.5, 0.5});

  const auto r = sanov_experiment(two, uniform, 100, 0.2, 2000, 21);
  CHECK(r.warning.empty());
  CHECK(r.bound == Approx(std::exp(-4.0)));
  REQUIRE(r.statistics.size() == 2000);
  // The exact tail is about 7.9e-5, so 2000 trials should see almost no hits.
  CHECK(r.empirical_probability <= 0.002);
  CHECK(r.pass);

  // On a two-point space the statistic is |S/n - 1/2|, a lattice value.
  const auto tiny = sanov_experiment(two, uniform, 4, 0.25, 50, 22);
  for (double w : tiny.statistics) {
    const double nearest =
        std::min({std::abs(w - 0.0), std::abs(w - 0.25), std::abs(w - 0.5)});
    CHECK(nearest <= 1e-12);
  }

  // Deviation levels above the diameter are unreachable.
  const auto far = sanov_experiment(two, uniform, 100, 1.5, 200, 23);
  CHECK(far.empirical_probability == 0.0);
  CHECK(far.pass);

  // A point mass resamples itself forever: the statistic is identically zero,
  // and the unfaithful base measure is reported.
  const auto atom = sanov_experiment(two, dirac(two, 0), 1, 0.5, 100, 24);
  CHECK_FALSE(atom.warning.empty());
  CHECK(atom.empirical_probability == 0.0);
  for (double w : atom.statistics) CHECK(w == 0.0);
  CHECK(atom.pass);

  // A multi-point space with uneven weights runs through the same solver.
  const auto line = line3_space();
  const auto skew = sanov_experiment(line, ProbabilityMeasure(line, {0.5, 0.3, 0.2}),
                                     50, 0.4, 500, 25);
  CHECK(skew.warning.empty());
  CHECK(skew.bound == Approx(std::exp(-50.0 * 0.16 / 4.0)));
  CHECK(skew.pass);
}

TEST_CASE("deviation experiment validates inputs and budget") {
  const auto two = two_point_space(1.0);
  const ProbabilityMeasure uniform(two, {0.5, 0.5});
  CHECK_THROWS_AS(sanov_experiment(nullptr, uniform, 10, 0.1, 10, 1), InvalidInput);
  CHECK_THROWS_AS(sanov_experiment(two_point_space(2.0), uniform, 10, 0.1, 10, 1), InvalidInput);
  CHECK_THROWS_AS(sanov_experiment(two, uniform, 0, 0.1, 10, 1), InvalidInput);
  CHECK_THROWS_AS(sanov_experiment(two, uniform, 10, 0.0, 10, 1), InvalidInput);
  CHECK_THROWS_AS(sanov_experiment(two, uniform, 10, -0.5, 10, 1), InvalidInput);
  CHECK_THROWS_AS(sanov_experiment(two, uniform, 10, std::nan(""), 10, 1), InvalidInput);
  CHECK_THROWS_AS(sanov_experiment(two, uniform, 10, 0.1, 0, 1), InvalidInput);
  CHECK_THROWS_AS(sanov_experiment(two, uniform, 1000000, 0.1, 101, 1), ResourceError);
}

TEST_CASE("median tails decay about the empirical median") {
  const std::vector<double> grid = {0.2, 0.4, 0.6, 0.8};
  const auto r = median_concentration(10, coordinate_function(0), grid, 20000, 31);
  REQUIRE(r.statistics.size() == grid.size());
  REQUIRE(r.stderrs.size() == grid.size());
  for (std::size_t i = 1; i < r.statistics.size(); ++i) {
    CHECK(r.statistics[i] <= r.statistics[i - 1]);
  }
  // A sphere coordinate is roughly Gaussian with variance 1/k, so the tail
  // at 0.2 is sizable and the fitted rate sits near 1/2.
  CHECK(r.statistics[0] > 0.3);
  CHECK(r.statistics[0] < 0.7);
  CHECK(r.statistics.back() > 0.0);
  CHECK(r.decay_rate > 0.2);
  CHECK(r.decay_rate < 1.5);
  CHECK(r.pass);

  const auto flat = median_concentration(10, constant_function(3.0), grid, 2000, 32);
  for (double tail : flat.statistics) CHECK(tail == 0.0);
  CHECK(flat.decay_rate == 0.0);
  CHECK(flat.pass);

  // High dimension pushes the tail at a fixed level toward zero.
  const auto sharp = median_concentration(50, coordinate_function(0), {0.5}, 20000, 33);
  CHECK(sharp.statistics[0] <= 0.02);
}

TEST_CASE("median concentration validates its inputs") {
  const auto f = coordinate_function(0);
  CHECK_THROWS_AS(median_concentration(2, f, {0.1}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(median_concentration(5, f, {}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(median_concentration(5, f, {0.2, 0.2}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(median_concentration(5, f, {0.3, 0.2}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(median_concentration(5, f, {-0.1, 0.2}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(median_concentration(5, f, {0.0}, 100, 1), InvalidInput);
  CHECK_THROWS_AS(median_concentration(5, f, {0.1}, 0, 1), InvalidInput);
  CHECK_THROWS_AS(median_concentration(5, coordinate_function(9), {0.1}, 100, 1), InvalidInput);
}

TEST_CASE("identical seeds reproduce identical results") {
  const auto fns = builtin_test_functions(5);
  const auto v1 = variance_experiment(5, fns, 3000, 99);
  const auto v2 = variance_experiment(5, fns, 3000, 99);
  CHECK(v1.statistics == v2.statistics);
  CHECK(v1.stderrs == v2.stderrs);
  CHECK(v1.pass == v2.pass);
  const auto v3 = variance_experiment(5, fns, 3000, 100);
  CHECK(v1.statistics != v3.statistics);

  const auto two = two_point_space(1.0);
  const ProbabilityMeasure uniform(two, {0.5, 0.5});
  const auto s1 = sanov_experiment(two, uniform, 30, 0.1, 400, 99);
  const auto s2 = sanov_experiment(two, uniform, 30, 0.1, 400, 99);
  CHECK(s1.statistics == s2.statistics);
  CHECK(s1.empirical_probability == s2.empirical_probability);
  const auto s3 = sanov_experiment(two, uniform, 30, 0.1, 400, 100);
  CHECK(s1.statistics != s3.statistics);

  const std::vector<double> grid = {0.25, 0.5};
  const auto m1 = median_concentration(6, coordinate_function(1), grid, 3000, 99);
  const auto m2 = median_concentration(6, coordinate_function(1), grid, 3000, 99);
  CHECK(m1.statistics == m2.statistics);
  CHECK(m1.decay_rate == m2.decay_rate);
}

TEST_CASE("the worker count never changes a result") {
  const auto fns = builtin_test_functions(5);
  const auto v1 = variance_experiment(5, fns, 2000, 7, 1);
  const auto v3 = variance_experiment(5, fns, 2000, 7, 3);
  CHECK(v1.statistics == v3.statistics);
  CHECK(v1.stderrs == v3.stderrs);

  const auto two = two_point_space(1.0);
  const ProbabilityMeasure uniform(two, {0.5, 0.5});
  const auto s1 = sanov_experiment(two, uniform, 25, 0.15, 300, 7, 1);
  const auto s4 = sanov_experiment(two, uniform, 25, 0.15, 300, 7, 4);
  CHECK(s1.statistics == s4.statistics);
  CHECK(s1.empirical_probability == s4.empirical_probability);

  const auto m1 = median_concentration(6, coordinate_function(0), {0.3}, 2000, 7, 1);
  const auto m2 = median_concentration(6, coordinate_function(0), {0.3}, 2000, 7, 2);
  CHECK(m1.statistics == m2.statistics);

  CHECK_THROWS_AS(variance_experiment(5, fns, 100, 7, 0), InvalidInput);
  CHECK_THROWS_AS(sanov_experiment(two, uniform, 5, 0.1, 10, 7, -1), InvalidInput);
  CHECK_THROWS_AS(median_concentration(5, coordinate_function(0), {0.1}, 10, 7, 0), InvalidInput);
}

}  // TEST_SUITE

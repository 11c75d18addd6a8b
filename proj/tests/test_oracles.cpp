// test_oracles.cpp — brute-force oracles pinned against closed forms and
// hand-checked values.  Everything here is independent of the production
// solvers, so later solver tests can lean on these implementations.
#include "doctest.h"

#include <cmath>
#include <vector>

#include "mmdist/errors.hpp"
#include "mmdist/oracles.hpp"
#include "test_helpers.hpp"

using namespace mmd;
using namespace mmd::testing;

TEST_SUITE_BEGIN("oracles");

TEST_CASE("transport between diracs is the point distance for every p") {
  const auto space = line3_space();
  for (double p : {1.0, 2.0, 3.5, 7.0}) {
    CHECK(transport_vertices(dirac(space, 0), dirac(space, 2), p) ==
          doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("transport of a measure to itself is zero") {
  const auto space = line3_space();
  const ProbabilityMeasure mu(space, {0.2, 0.5, 0.3});
  CHECK(transport_vertices(mu, mu, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(transport_vertices(mu, mu, 2.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("three-point line, corner to corner, p = 2") {
  // Only one route exists: all mass travels distance 2, so the value is 2.
  const auto space = line3_space();
  const auto value = transport_vertices(dirac(space, 0), dirac(space, 2), 2.0);
  CHECK(value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("two-point closed form |mu0 - nu0|^(1/p) * d") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const double d = 0.5 + 2.0 * rng.uniform();
    const auto space = two_point_space(d);
    const ProbabilityMeasure mu(space, {rng.uniform(), 1.0});
    const ProbabilityMeasure nu(space, {rng.uniform(), 1.0});
    const double delta = std::abs(mu.weight(0) - nu.weight(0));
    for (double p : {1.0, 2.0, 4.0}) {
      const double expected = std::pow(delta, 1.0 / p) * d;
      CHECK(transport_vertices(mu, nu, p) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("splitting mass both ways on the line costs 1") {
  const auto space = line3_space();
  const ProbabilityMeasure mu(space, {0.5, 0.0, 0.5});
  const ProbabilityMeasure nu(space, {0.0, 1.0, 0.0});
  CHECK(transport_vertices(mu, nu, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("equidistant closed form: W_1 = r * l1(mu - nu)") {
  Rng rng(22);
  for (int n : {2, 3, 4}) {
    const double r = 0.25 + rng.uniform();
    std::vector<double> dist(static_cast<std::size_t>(n) * n, 2.0 * r);
    for (int i = 0; i < n; ++i) dist[static_cast<std::size_t>(i) * n + i] = 0.0;
    const auto space = make_space(n, std::move(dist));
    for (int trial = 0; trial < 20; ++trial) {
      const auto mu = random_measure(rng, space);
      const auto nu = random_measure(rng, space);
      double l1 = 0.0;
      for (int i = 0; i < n; ++i) l1 += std::abs(mu.weight(i) - nu.weight(i));
      CHECK(transport_vertices(mu, nu, 1.0) == doctest::Approx(r * l1).epsilon(1e-10));
    }
  }
}

TEST_CASE("transport oracle rejects oversized supports and bad p") {
  Rng rng(23);
  const auto space = random_space(rng, 5);
  const auto mu = random_measure(rng, space);  // support 5 > 4
  const auto nu = random_measure(rng, space);
  CHECK_THROWS_AS(transport_vertices(mu, nu, 1.0), ResourceError);
  const auto small = two_point_space(1.0);
  CHECK_THROWS_AS(
      transport_vertices(dirac(small, 0), dirac(small, 1), 0.5), InvalidInput);
}

TEST_CASE("bottleneck on a single pair") {
  const auto space = line3_space();
  const auto result = bottleneck_bruteforce(*space, {0}, {2});
  CHECK(result.value == 2.0);
  CHECK(result.perm == std::vector<int>{0});
}

TEST_CASE("bottleneck picks the cheap pairing") {
  // d(x1,y1) = d(x2,y2) = 1 and d(x1,y2) = d(x2,y1) = 5: identity wins.
  const auto space = make_space(4, {0, 5, 1, 5,   //
                                    5, 0, 5, 1,   //
                                    1, 5, 0, 5,   //
                                    5, 1, 5, 0});
  const auto result = bottleneck_bruteforce(*space, {0, 1}, {2, 3});
  CHECK(result.value == 1.0);
  CHECK(result.perm == std::vector<int>{0, 1});
}

TEST_CASE("bottleneck budget and input checks") {
  Rng rng(24);
  const auto space = random_space(rng, 8);
  const std::vector<int> pts = {0, 1, 2, 3, 4, 5, 6, 7};
  CHECK_THROWS_AS(bottleneck_bruteforce(*space, pts, pts), ResourceError);
  CHECK_THROWS_AS(bottleneck_bruteforce(*space, {0}, {0, 1}), InvalidInput);
  CHECK_THROWS_AS(bottleneck_bruteforce(*space, {}, {}), InvalidInput);
}

TEST_CASE("levy-prokhorov oracle: diracs give min(d, 1)") {
  for (double d : {0.35, 0.8, 2.0}) {
    const auto space = two_point_space(d);
    const double value = lp_subset_oracle(dirac(space, 0), dirac(space, 1));
    CHECK(std::abs(value - std::min(d, 1.0)) <= 2e-4);
  }
}

TEST_CASE("levy-prokhorov oracle: identical measures give ~0") {
  Rng rng(25);
  const auto space = random_space(rng, 4);
  const auto mu = random_measure(rng, space);
  // The infimum 0 is approached from above; the grid resolves it to one step.
  CHECK(lp_subset_oracle(mu, mu) <= 1e-4 + 1e-12);
}

TEST_CASE("levy-prokhorov oracle budget") {
  Rng rng(26);
  const auto space = random_space(rng, 6);
  const auto mu = random_measure(rng, space);
  const auto nu = random_measure(rng, space);
  CHECK_THROWS_AS(lp_subset_oracle(mu, nu), ResourceError);
}

TEST_SUITE_END();

// test_inductive.cpp — affine stage maps, inductive systems, and the limit
// metrics on measure threads.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "mmdist/errors.hpp"
#include "mmdist/generators.hpp"
#include "mmdist/inductive.hpp"
#include "mmdist/measure.hpp"
#include "mmdist/metric_space.hpp"
#include "mmdist/rng.hpp"
#include "mmdist/transport.hpp"
#include "test_helpers.hpp"

namespace {

using namespace mmd;
using namespace mmd::testing;

const StageDistance kW1{DistanceKind::kWasserstein, 1.0};
const StageDistance kWinf{DistanceKind::kWassersteinInf, 1.0};

SpacePtr shared(FiniteMetricSpace space) {
  return std::make_shared<FiniteMetricSpace>(std::move(space));
}

}  // namespace

TEST_SUITE("inductive") {

TEST_CASE("affine stage maps act linearly and preserve mass") {
  const SpacePtr src = line3_space();
  const SpacePtr dst = two_point_space(1.0);
  const AffineStageMap map(src, dst,
                           {dirac(dst, 0), ProbabilityMeasure(dst, {0.5, 0.5}),
                            dirac(dst, 1)});
  CHECK(map.source() == src);
  CHECK(map.target() == dst);
  CHECK(map.image_of(1).weight(0) == 0.5);

  // Dyadic weights keep every step exact.
  const ProbabilityMeasure mu(src, {0.5, 0.25, 0.25});
  const ProbabilityMeasure out = map.apply(mu);
  CHECK(out.weight(0) == 0.625);
  CHECK(out.weight(1) == 0.375);

  Rng rng(3);
  const ProbabilityMeasure a = random_measure(rng, src);
  const ProbabilityMeasure b = random_measure(rng, src);
  const ProbabilityMeasure lhs = map.apply(mixture({0.25, 0.75}, {a, b}));
  const ProbabilityMeasure rhs = mixture({0.25, 0.75}, {map.apply(a), map.apply(b)});
  CHECK(lhs.max_weight_diff(rhs) <= 1e-15);
  const ProbabilityMeasure pushed = map.apply(a);
  double mass = 0.0;
  for (double w : pushed.weights()) mass += w;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

  const AffineStageMap id = AffineStageMap::identity(src);
  CHECK(id.apply(a).max_weight_diff(a) <= 1e-15);
  CHECK((id.image_of(2).weights() == std::vector<double>{0.0, 0.0, 1.0}));

  CHECK_THROWS_AS((AffineStageMap(src, dst, {dirac(dst, 0)})), InvalidInput);
  CHECK_THROWS_AS((AffineStageMap(src, dst, {dirac(src, 0), dirac(dst, 0), dirac(dst, 1)})),
                  InvalidInput);
  CHECK_THROWS_AS(map.apply(ProbabilityMeasure(dst, {0.5, 0.5})), InvalidInput);
}

TEST_CASE("map composition matches sequential application") {
  Rng rng(11);
  const SpacePtr a = line3_space();
  const SpacePtr b = two_point_space(1.0);
  const SpacePtr c = two_point_space(2.0);
  const AffineStageMap f(a, b,
                         {dirac(b, 0), ProbabilityMeasure(b, {0.25, 0.75}), dirac(b, 1)});
  const AffineStageMap g(b, c, {ProbabilityMeasure(c, {0.9, 0.1}), dirac(c, 1)});
  const AffineStageMap gf = compose(g, f);
  CHECK(gf.source() == a);
  CHECK(gf.target() == c);
  for (int t = 0; t < 10; ++t) {
    const ProbabilityMeasure mu = random_measure(rng, a);
    CHECK(gf.apply(mu).max_weight_diff(g.apply(f.apply(mu))) <= 1e-15);
  }
  CHECK_THROWS_AS(compose(f, g), InvalidInput);
}

TEST_CASE("nonexpansiveness certificates report the worst sampled pair") {
  const SpacePtr line = line3_space();
  const ExpansionReport id_report =
      check_nonexpansive(AffineStageMap::identity(line), kW1, kW1, 20, 5);
  CHECK(id_report.pass);
  CHECK(id_report.max_ratio == doctest::Approx(1.0).epsilon(1e-12));

  const AffineStageMap collapse(line, line,
                                {dirac(line, 0), dirac(line, 0), dirac(line, 0)});
  const ExpansionReport col = check_nonexpansive(collapse, kW1, kW1, 20, 5);
  CHECK(col.pass);
  CHECK(col.max_ratio <= 1e-12);

  const SpacePtr near_pts = two_point_space(1.0);
  const SpacePtr far_pts = two_point_space(3.0);
  const AffineStageMap stretch(near_pts, far_pts, {dirac(far_pts, 0), dirac(far_pts, 1)});
  // With zero mixture samples the single dirac pair is the worst pair.
  const ExpansionReport bad0 = check_nonexpansive(stretch, kW1, kW1, 0, 5);
  CHECK_FALSE(bad0.pass);
  CHECK(bad0.max_ratio == 3.0);
  CHECK(bad0.worst_source_distance == 1.0);
  CHECK(bad0.worst_target_distance == 3.0);
  CHECK((bad0.worst_a == std::vector<double>{1.0, 0.0}));
  CHECK((bad0.worst_b == std::vector<double>{0.0, 1.0}));
  const ExpansionReport bad = check_nonexpansive(stretch, kW1, kW1, 10, 5);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_target_distance ==
        doctest::Approx(3.0 * bad.worst_source_distance).epsilon(1e-9));
  // Same seed, same verdict.
  const ExpansionReport replay = check_nonexpansive(stretch, kW1, kW1, 10, 5);
  CHECK(replay.max_ratio == bad.max_ratio);

  CHECK_THROWS_AS(check_nonexpansive(stretch, kW1, kW1, -1, 5), InvalidInput);
}

TEST_CASE("simplex embedding is isometric onto grid vertices") {
  const SpacePtr equid = shared(gen_equidistant(3, 1.0));
  const SpacePtr grid = shared(gen_simplicial(SimplicialKind::kBall, 2, 3));
  const AffineStageMap embed = simplex_embed(equid, grid);
  CHECK(embed.source() == equid);
  CHECK(embed.target() == grid);

  // Each vertex goes to the point mass at the grid vertex with the matching
  // barycentric coordinate.
  for (int j = 0; j < 3; ++j) {
    const ProbabilityMeasure img = embed.apply(dirac(equid, j));
    REQUIRE(img.support().size() == 1);
    const int v = img.support().front();
    CHECK(img.weight(v) == 1.0);
    for (int t = 0; t < 3; ++t) {
      CHECK(grid->coords()[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)] ==
            (t == j ? 1.0 : 0.0));
    }
  }

  // Hand value: a vertex against the uniform barycenter.  Two thirds of the
  // mass travels distance 2, so the grid-side distance is 4/3.
  const ProbabilityMeasure bary(equid, {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  const double d = evaluate_distance(kW1, embed.apply(dirac(equid, 1)), embed.apply(bary));
  CHECK(d == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  // Isometry on random measure pairs.
  Rng rng(2026);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const ProbabilityMeasure a = random_measure(rng, equid);
    const ProbabilityMeasure b = random_measure(rng, equid);
    const double ds = evaluate_distance(kW1, a, b);
    const double dt = evaluate_distance(kW1, embed.apply(a), embed.apply(b));
    worst = std::max(worst, std::abs(ds - dt));
  }
  CHECK(worst <= 1e-8);

  CHECK_THROWS_AS(simplex_embed(line3_space(), grid), InvalidInput);
  CHECK_THROWS_AS(simplex_embed(equid, two_point_space(1.0)), InvalidInput);
  CHECK_THROWS_AS(simplex_embed(shared(gen_equidistant(4, 1.0)), grid), InvalidInput);
  // Remove the grid point at e_0: the embedding has nowhere to send vertex 0.
  std::vector<int> keep;
  for (int i = 0; i < grid->size(); ++i) {
    if (grid->coords()[static_cast<std::size_t>(i)][0] != 1.0) keep.push_back(i);
  }
  CHECK_THROWS_AS(simplex_embed(equid, shared(subspace(*grid, keep))), InvalidInput);
}

TEST_CASE("skeleton projection reads off barycentric coordinates") {
  const SpacePtr equid = shared(gen_equidistant(3, 1.0));
  const SpacePtr ball = shared(gen_simplicial(SimplicialKind::kBall, 2, 4));
  const AffineStageMap project = skeleton_project(ball, equid);
  CHECK(project.source() == ball);
  CHECK(project.target() == equid);

  // Point masses land exactly on their barycentric coordinate vectors
  // (mesh 4 keeps the coordinates dyadic).
  for (int i = 0; i < ball->size(); ++i) {
    const ProbabilityMeasure out = project.apply(dirac(ball, i));
    for (int t = 0; t < 3; ++t) {
      CHECK(out.weight(t) ==
            ball->coords()[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
    }
  }

  CHECK(check_nonexpansive(project, kW1, kW1, 40, 77).pass);
  const SpacePtr equid4 = shared(gen_equidistant(4, 1.0));
  const SpacePtr ball3 = shared(gen_simplicial(SimplicialKind::kBall, 3, 4));
  CHECK(check_nonexpansive(skeleton_project(ball3, equid4), kW1, kW1, 25, 78).pass);
  const SpacePtr sphere = shared(gen_simplicial(SimplicialKind::kSphere, 2, 4));
  CHECK(check_nonexpansive(skeleton_project(sphere, equid), kW1, kW1, 40, 79).pass);

  CHECK_THROWS_AS(skeleton_project(two_point_space(1.0), equid), InvalidInput);
  CHECK_THROWS_AS(skeleton_project(ball, line3_space()), InvalidInput);
}

TEST_CASE("projection after embedding is the identity on the weight simplex") {
  const SpacePtr equid = shared(gen_equidistant(3, 1.0));
  for (const SimplicialKind kind : {SimplicialKind::kBall, SimplicialKind::kSphere}) {
    CAPTURE(static_cast<int>(kind));
    const SpacePtr grid = shared(gen_simplicial(kind, 2, 4));
    const AffineStageMap embed = simplex_embed(equid, grid);
    const AffineStageMap project = skeleton_project(grid, equid);

    const AffineStageMap round_trip = compose(project, embed);
    for (int j = 0; j < 3; ++j) {
      CHECK((round_trip.image_of(j).weights() == dirac(equid, j).weights()));
    }
    Rng rng(404);
    for (int t = 0; t < 25; ++t) {
      const ProbabilityMeasure mu = random_measure(rng, equid);
      CHECK(round_trip.apply(mu).max_weight_diff(mu) <= 1e-15);
    }

    // The reverse composite smears a point mass over the vertices; the
    // transport cost is at most the coordinate-weighted distance to them.
    const AffineStageMap blur = compose(embed, project);
    std::vector<int> vertex(3, -1);
    for (int j = 0; j < 3; ++j) vertex[static_cast<std::size_t>(j)] = embed.image_of(j).support().front();
    for (int i = 0; i < grid->size(); ++i) {
      const auto& c = grid->coords()[static_cast<std::size_t>(i)];
      double bound = 0.0;
      for (int j = 0; j < 3; ++j) {
        bound += c[static_cast<std::size_t>(j)] * grid->dist(vertex[static_cast<std::size_t>(j)], i);
      }
      const double moved = evaluate_distance(kW1, blur.apply(dirac(grid, i)), dirac(grid, i));
      CHECK(moved <= bound + 1e-9);
      if (kind == SimplicialKind::kBall) {
        // On the solid grid the distance to vertex j is 2(1 - c_j), so the
        // bound closes to 2(1 - sum of squared coordinates).
        double sq = 0.0;
        for (double v : c) sq += v * v;
        CHECK(bound == doctest::Approx(2.0 * (1.0 - sq)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("inductive systems validate shape and connecting maps") {
  const SpacePtr two = two_point_space(1.0);
  const AffineStageMap id2 = AffineStageMap::identity(two);

  const InductiveSystem single({Stage{two, kW1, 1.0}}, {});
  CHECK(single.depth() == 1);
  CHECK(single.stage(0).space == two);

  CHECK_THROWS_AS((InductiveSystem({}, {})), InvalidInput);
  CHECK_THROWS_AS((InductiveSystem({Stage{two, kW1, 1.0}}, {id2})), InvalidInput);
  CHECK_THROWS_AS((InductiveSystem({Stage{two, kW1, 1.0}, Stage{line3_space(), kW1, 1.0}},
                                   {id2})),
                  InvalidInput);  // map does not accept stage-1 measures
  CHECK_THROWS_AS((InductiveSystem({Stage{line3_space(), kW1, 1.0}, Stage{two, kW1, 1.0}},
                                   {id2})),
                  InvalidInput);  // map does not land in stage 0
  CHECK_THROWS_AS((InductiveSystem({Stage{two, kW1, 0.0}}, {})), InvalidInput);
  CHECK_THROWS_AS((InductiveSystem({Stage{two, kW1, -1.0}}, {})), InvalidInput);
  CHECK_THROWS_AS((InductiveSystem({Stage{nullptr, kW1, 1.0}}, {})), InvalidInput);

  // An expanding connecting map is rejected, and the failure names the stage.
  const SpacePtr far_pts = two_point_space(3.0);
  const AffineStageMap stretch(two, far_pts, {dirac(far_pts, 0), dirac(far_pts, 1)});
  try {
    const InductiveSystem bad({Stage{far_pts, kW1, 1.0}, Stage{two, kW1, 1.0}}, {stretch});
    FAIL_CHECK("expected CheckFailure for an expanding connecting map");
  } catch (const CheckFailure& e) {
    const std::string msg = e.what();
    CHECK(msg.find("stage 0") != std::string::npos);
    CHECK(msg.find("expands") != std::string::npos);
  }
  // The same map passes once the stage scales absorb the stretch.
  const InductiveSystem rescaled({Stage{far_pts, kW1, 1.0 / 3.0}, Stage{two, kW1, 1.0}},
                                 {stretch});
  CHECK(rescaled.depth() == 2);
}

TEST_CASE("limit distance is the sup over stages") {
  // Two stages, worked by hand.  Stage 1 is the unit-step line on three
  // points, stage 0 a unit two-point space; the connecting map merges the
  // right two line points.  The thread pair below has stage distances
  // (0.3, 0.6), so the limit is 0.6.
  const SpacePtr base = two_point_space(1.0);
  const SpacePtr line = line3_space();
  const AffineStageMap merge(line, base, {dirac(base, 0), dirac(base, 1), dirac(base, 1)});
  const InductiveSystem system({Stage{base, kW1, 1.0}, Stage{line, kW1, 1.0}}, {merge});

  const MeasureThread sigma{ProbabilityMeasure(base, {0.5, 0.5}),
                            ProbabilityMeasure(line, {0.5, 0.3, 0.2})};
  const MeasureThread tau{ProbabilityMeasure(base, {0.2, 0.8}),
                          ProbabilityMeasure(line, {0.2, 0.3, 0.5})};
  CHECK(system.stage_distance(0, sigma[0], tau[0]) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(system.stage_distance(1, sigma[1], tau[1]) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(limit_metric(system, sigma, tau) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(limit_metric(system, tau, sigma) ==
        doctest::Approx(limit_metric(system, sigma, tau)).epsilon(1e-12));
  CHECK(limit_metric(system, sigma, sigma) <= 1e-12);

  // A stationary system evaluates to the stage distance itself.
  const AffineStageMap id_line = AffineStageMap::identity(line);
  const InductiveSystem stationary(
      {Stage{line, kW1, 1.0}, Stage{line, kW1, 1.0}, Stage{line, kW1, 1.0}},
      {id_line, id_line});
  Rng rng(9);
  const ProbabilityMeasure mu = random_measure(rng, line);
  const ProbabilityMeasure nu = random_measure(rng, line);
  const MeasureThread ms{mu, mu, mu};
  const MeasureThread ns{nu, nu, nu};
  CHECK(limit_metric(stationary, ms, ns) == evaluate_distance(kW1, mu, nu));

  // Stage scales multiply the evaluated distances.
  const InductiveSystem half({Stage{line, kW1, 0.5}}, {});
  const MeasureThread m1{mu};
  const MeasureThread n1{nu};
  CHECK(limit_metric(half, m1, n1) ==
        doctest::Approx(0.5 * evaluate_distance(kW1, mu, nu)).epsilon(1e-15));

  CHECK_THROWS_AS(system.stage_distance(2, sigma[0], tau[0]), InvalidInput);
  CHECK_THROWS_AS(system.stage_distance(0, sigma[1], tau[1]), InvalidInput);
  CHECK_THROWS_AS(limit_metric(system, m1, tau), InvalidInput);  // wrong length
  const MeasureThread swapped{sigma[1], sigma[0]};
  CHECK_THROWS_AS(limit_metric(system, swapped, tau), InvalidInput);  // wrong spaces

  // Incompatibility is reported with the thread and the first bad stage.
  const MeasureThread bad_tau{ProbabilityMeasure(base, {0.3, 0.7}), tau[1]};
  try {
    limit_metric(system, sigma, bad_tau);
    FAIL_CHECK("expected InvalidInput for an incompatible thread");
  } catch (const InvalidInput& e) {
    const std::string msg = e.what();
    CHECK(msg.find("second") != std::string::npos);
    CHECK(msg.find("stage 0") != std::string::npos);
  }
  // A mismatch below the compatibility tolerance is accepted.
  const MeasureThread near_tau{ProbabilityMeasure(base, {0.2 + 5e-8, 0.8 - 5e-8}), tau[1]};
  CHECK(limit_metric(system, sigma, near_tau) == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("limit distance satisfies the metric axioms") {
  const SpacePtr equid = shared(gen_equidistant(3, 1.0));
  const SpacePtr grid = shared(gen_simplicial(SimplicialKind::kBall, 2, 4));
  const AffineStageMap project = skeleton_project(grid, equid);
  const AffineStageMap id_grid = AffineStageMap::identity(grid);
  const InductiveSystem system(
      {Stage{equid, kW1, 1.0}, Stage{grid, kW1, 1.0}, Stage{grid, kW1, 1.0}},
      {project, id_grid});

  Rng rng(31);
  std::vector<MeasureThread> threads;
  for (int t = 0; t < 3; ++t) {
    const ProbabilityMeasure rho = random_measure(rng, grid);
    threads.push_back(MeasureThread{project.apply(rho), rho, rho});
  }
  double d[3][3];
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) d[a][b] = limit_metric(system, threads[a], threads[b]);
  }
  for (int a = 0; a < 3; ++a) {
    CHECK(d[a][a] <= 1e-12);
    for (int b = a + 1; b < 3; ++b) {
      CHECK(d[a][b] > 0.0);
      CHECK(d[a][b] == doctest::Approx(d[b][a]).epsilon(1e-9));
    }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        CHECK(d[a][c] <= d[a][b] + d[b][c] + 1e-9);
      }
    }
  }
}

TEST_CASE("tail distance keeps the last half of the stage sequence") {
  // Stage values (0.2, 1, 1, 1): the tail covers the last two stages, so the
  // reported value is 1 and the early transient is visible only in the
  // per-stage sequence.
  const SpacePtr close_pts = two_point_space(0.2);
  const SpacePtr two = two_point_space(1.0);
  const AffineStageMap shrink(two, close_pts, {dirac(close_pts, 0), dirac(close_pts, 1)});
  const AffineStageMap id2 = AffineStageMap::identity(two);
  const InductiveSystem system({Stage{close_pts, kWinf, 1.0}, Stage{two, kWinf, 1.0},
                                Stage{two, kWinf, 1.0}, Stage{two, kWinf, 1.0}},
                               {shrink, id2, id2});
  MeasureThread sigma{dirac(close_pts, 0)};
  MeasureThread tau{dirac(close_pts, 1)};
  for (int k = 1; k < 4; ++k) {
    sigma.push_back(dirac(two, 0));
    tau.push_back(dirac(two, 1));
  }
  const ProWinfResult r = pro_winf(system, sigma, tau);
  CHECK((r.stage_values == std::vector<double>{0.2, 1.0, 1.0, 1.0}));
  CHECK(r.value == 1.0);
  CHECK(pro_winf(system, sigma, sigma).value == 0.0);

  // The declared stage metrics are ignored; only the order-infinity values
  // enter.
  const InductiveSystem declared_w1({Stage{close_pts, kW1, 1.0}, Stage{two, kW1, 1.0},
                                     Stage{two, kW1, 1.0}, Stage{two, kW1, 1.0}},
                                    {shrink, id2, id2});
  CHECK((pro_winf(declared_w1, sigma, tau).stage_values ==
         std::vector<double>{0.2, 1.0, 1.0, 1.0}));

  // Depth one: the single stage is its own tail, and scales apply.
  const InductiveSystem single({Stage{two, kWinf, 0.5}}, {});
  const MeasureThread s1{dirac(two, 0)};
  const MeasureThread t1{dirac(two, 1)};
  const ProWinfResult one = pro_winf(single, s1, t1);
  CHECK(one.stage_values.size() == 1);
  CHECK(one.value == 0.5);
}

}  // TEST_SUITE

#include "mmdist/json_io.hpp"

#include <filesystem>
#include <string>

#include "doctest.h"
#include "mmdist/errors.hpp"
#include "mmdist/generators.hpp"
#include "mmdist/length_graph.hpp"
#include "mmdist/rng.hpp"
#include "mmdist/transport.hpp"
#include "test_helpers.hpp"

using namespace mmd;
using namespace mmd::testing;
using doctest::Approx;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "mmdist_json_io_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("json_io") {

TEST_CASE("spaces round-trip bit for bit") {
  Rng rng(401);
  const auto cloud = euclidean_cloud_space(rng, 7, 3);
  const auto back = space_from_json(space_to_json(*cloud));
  CHECK(back.digest() == cloud->digest());
  CHECK(back.same_metric_as(*cloud));
  CHECK(back.coords() == cloud->coords());

  const FiniteMetricSpace labeled(2, {0.0, 1.5, 1.5, 0.0}, {"left", "right"});
  const auto labeled_back = space_from_json(space_to_json(labeled));
  CHECK(labeled_back.labels() == labeled.labels());
  CHECK(labeled_back.digest() == labeled.digest());

  // Optional blocks are omitted, not emitted empty.
  const std::string bare = space_to_json(*two_point_space(1.0));
  CHECK(bare.find("labels") == std::string::npos);
  CHECK(bare.find("coords") == std::string::npos);
}

TEST_CASE("malformed space documents are rejected with context") {
  CHECK_THROWS_AS(space_from_json("{"), InvalidInput);
  CHECK_THROWS_AS(space_from_json("[1,2]"), InvalidInput);
  CHECK_THROWS_AS(space_from_json(R"({"size": 2})"), InvalidInput);
  CHECK_THROWS_AS(space_from_json(R"({"size": 2, "dist": [[0,1]]})"), InvalidInput);
  CHECK_THROWS_AS(space_from_json(R"({"size": 2, "dist": [[0,1],[1]]})"), InvalidInput);
  CHECK_THROWS_AS(space_from_json(R"({"size": 2, "dist": [[0,"x"],[1,0]]})"), InvalidInput);
  CHECK_THROWS_AS(space_from_json(R"({"size": 2.5, "dist": [[0,1],[1,0]]})"), InvalidInput);
  CHECK_THROWS_AS(space_from_json(R"({"size": 2, "dist": [[0,1],[1,0]], "labels": [3]})"),
                  InvalidInput);
}

TEST_CASE("graphs round-trip and validate") {
  const LengthGraph gasket = gen_sierpinski(FractalKind::kGasket, 2);
  const LengthGraph back = graph_from_json(graph_to_json(gasket));
  CHECK(back.vertices == gasket.vertices);
  REQUIRE(back.edges.size() == gasket.edges.size());
  CHECK(back.coords == gasket.coords);
  CHECK(intrinsic_metric(back).digest() == intrinsic_metric(gasket).digest());

  CHECK_THROWS_AS(graph_from_json(R"({"edges": []})"), InvalidInput);
  CHECK_THROWS_AS(graph_from_json(R"({"vertices": 2, "edges": [[0,1]]})"), InvalidInput);
  CHECK_THROWS_AS(graph_from_json(R"({"vertices": 2, "edges": [[0,5,1.0]]})"), InvalidInput);
  CHECK_THROWS_AS(graph_from_json(R"({"vertices": 2, "edges": [[0,1,-1.0]]})"), InvalidInput);
}

TEST_CASE("measures resolve their space inline, by reference, or from the caller") {
  const auto line = line3_space();
  const ProbabilityMeasure mu(line, {0.5, 0.3, 0.2});

  const auto inline_back = measure_from_json(measure_to_json(mu));
  CHECK(inline_back.weights() == mu.weights());
  CHECK(inline_back.space()->digest() == line->digest());

  const auto dir = scratch_dir();
  write_text_file((dir / "line.json").string(), space_to_json(*line));
  const auto by_ref = measure_from_json(measure_to_json(mu, "line.json"), dir.string());
  CHECK(by_ref.weights() == mu.weights());
  CHECK(by_ref.space()->same_metric_as(*line));

  // Supplying the expected space shares the caller's object.
  const auto shared = measure_from_json(R"({"weights": [0.25, 0.25, 0.5]})", "", line);
  CHECK(shared.space().get() == line.get());
  CHECK(shared.weight(2) == 0.5);

  // Expected space plus an agreeing reference keeps the caller's object too.
  const auto both = measure_from_json(measure_to_json(mu, "line.json"), dir.string(), line);
  CHECK(both.space().get() == line.get());

  CHECK_THROWS_AS(measure_from_json(R"({"weights": [1.0]})"), InvalidInput);
  CHECK_THROWS_AS(measure_from_json(measure_to_json(mu), "", two_point_space(1.0)),
                  InvalidInput);
  CHECK_THROWS_AS(measure_from_json(R"({"space": 7, "weights": [1.0]})"), InvalidInput);
  CHECK_THROWS_AS(measure_from_json(R"({"space": "missing.json", "weights": [1.0]})",
                                    dir.string()),
                  InvalidInput);
}

TEST_CASE("systems and threads rebuild and evaluate") {
  const auto dir = scratch_dir();
  write_text_file((dir / "stage0.json").string(), space_to_json(*two_point_space(1.0)));
  const std::string system_text = R"({
    "stages": [
      {"space": "stage0.json", "metric": "wp", "p": 1.0},
      {"space": {"size": 3, "dist": [[0,1,2],[1,0,1],[2,1,0]]}, "metric": "wp", "scale": 1.0}
    ],
    "maps": [
      [[1.0, 0.0], [0.0, 1.0], [0.0, 1.0]]
    ]
  })";
  const InductiveSystem system = system_from_json(system_text, dir.string());
  CHECK(system.depth() == 2);
  CHECK(system.stage(0).space->size() == 2);
  CHECK(system.stage(1).space->size() == 3);

  const auto sigma = thread_from_json(
      R"({"weights": [[0.5, 0.5], [0.5, 0.3, 0.2]]})", system);
  const auto tau = thread_from_json(
      R"({"weights": [[0.2, 0.8], [0.2, 0.3, 0.5]]})", system);
  CHECK(limit_metric(system, sigma, tau) == Approx(0.6).epsilon(1e-12));

  CHECK_THROWS_AS(thread_from_json(R"({"weights": [[0.5, 0.5]]})", system), InvalidInput);
  CHECK_THROWS_AS(system_from_json(R"({"stages": [], "maps": []})"), InvalidInput);
  CHECK_THROWS_AS(system_from_json(R"({"stages": [{"space": {"size": 1, "dist": [[0]]},
      "metric": "wp"}], "maps": [[[1.0]]]})"),
                  InvalidInput);
  // Unknown metric names and bad map shapes are named in the error.
  const std::string bad_metric = R"({"stages": [
      {"space": {"size": 1, "dist": [[0]]}, "metric": "euclid"}], "maps": []})";
  CHECK_THROWS_AS(system_from_json(bad_metric), InvalidInput);
  const std::string bad_rows = R"({
    "stages": [
      {"space": {"size": 2, "dist": [[0,1],[1,0]]}, "metric": "wp"},
      {"space": {"size": 3, "dist": [[0,1,2],[1,0,1],[2,1,0]]}, "metric": "wp"}
    ],
    "maps": [ [[1.0, 0.0], [0.0, 1.0]] ]
  })";
  CHECK_THROWS_AS(system_from_json(bad_rows), InvalidInput);
}

TEST_CASE("digests are stable and hex-formatted") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(to_hex(0) == "0000000000000000");
  CHECK(to_hex(0xcbf29ce484222325ull) == "cbf29ce484222325");

  const auto dir = scratch_dir();
  const auto path = (dir / "digest_probe.txt").string();
  write_text_file(path, "abc");
  CHECK(file_digest(path) == "fnv1a64:" + to_hex(fnv1a64("abc")));
  CHECK(read_text_file(path) == "abc");

  CHECK_THROWS_AS(read_text_file((dir / "no_such_file").string()), InvalidInput);
  CHECK_THROWS_AS(write_text_file((dir / "no_dir" / "x").string(), "x"), InvalidInput);
}

}  // TEST_SUITE

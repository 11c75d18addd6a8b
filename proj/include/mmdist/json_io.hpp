// json_io.hpp — JSON serialization for the file formats the command-line
// tool exchanges: metric spaces, length graphs, measures, inductive
// systems, and measure threads, plus small file and digest helpers.
//
// Formats (all top-level objects):
//   space   { "size": n, "dist": [[ ... n rows of n ... ]],
//             "labels": [ ... ]?, "coords": [[ ... ]]? }
//   graph   { "vertices": n, "edges": [[u, v, len], ...], "coords": [[...]]? }
//   measure { "space": <inline space object | path string>, "weights": [...] }
//   system  { "stages": [ { "space": <inline | path>, "metric": "wp"|"winf"|"lp",
//             "p": number?, "scale": number? }, ... ],
//             "maps": [ <matrix, one row per source point of stage k+1,
//                        each row a weight vector over stage k>, ... ] }
//   thread  { "weights": [[ ... one vector per stage ... ]] }
//
// Doubles survive a write/read cycle bit for bit (shortest round-trip
// formatting on output, correctly rounded parsing on input), so digests of
// reloaded spaces match the originals exactly.  Malformed input of any kind
// surfaces as InvalidInput with the offending context in the message.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "mmdist/inductive.hpp"
#include "mmdist/length_graph.hpp"
#include "mmdist/measure.hpp"
#include "mmdist/metric_space.hpp"

namespace mmd {

std::string space_to_json(const FiniteMetricSpace& space);
FiniteMetricSpace space_from_json(const std::string& text);

std::string graph_to_json(const LengthGraph& graph);
LengthGraph graph_from_json(const std::string& text);

// When `space_ref` is empty the measure's space is embedded inline;
// otherwise the reference string is written as given.
std::string measure_to_json(const ProbabilityMeasure& mu, const std::string& space_ref = "");

// Resolves the measure's space as follows: a path reference is loaded
// relative to `base_dir` (absolute paths stay absolute); an inline object is
// parsed directly; a missing "space" field falls back to `expected`.  When
// both a parsed space and `expected` are present they must agree
// (same_metric_as), and `expected` is then used so callers share one space
// object.  Throws InvalidInput when no space can be resolved or on mismatch.
ProbabilityMeasure measure_from_json(const std::string& text, const std::string& base_dir = "",
                                     SpacePtr expected = nullptr);

// Stage spaces referenced by path are loaded relative to `base_dir`.
// Construction runs the full inductive-system checks, so a file whose maps
// expand the stage distances throws CheckFailure.
InductiveSystem system_from_json(const std::string& text, const std::string& base_dir = "");

// One measure per stage of `system`, in stage order.
MeasureThread thread_from_json(const std::string& text, const InductiveSystem& system);

// 64-bit FNV-1a over raw bytes, and its fixed-width hex form.
std::uint64_t fnv1a64(std::string_view bytes);
std::string to_hex(std::uint64_t value);

// Digest string "fnv1a64:<hex>" of a file's raw contents.
std::string file_digest(const std::string& path);

// Whole-file read/write; failures throw InvalidInput naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mmd

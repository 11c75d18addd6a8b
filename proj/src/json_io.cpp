#include "mmdist/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "mmdist/errors.hpp"
#include "mmdist/transport.hpp"

namespace mmd {
namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& context) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput("malformed JSON (" + context + "): " + e.what());
  }
}

const json& require_field(const json& j, const char* name, const std::string& context) {
  if (!j.is_object() || !j.contains(name)) {
    throw InvalidInput(context + " is missing the \"" + name + "\" field");
  }
  return j.at(name);
}

int read_int(const json& j, const std::string& context) {
  if (!j.is_number_integer()) throw InvalidInput(context + " must be an integer");
  return j.get<int>();
}

double read_double(const json& j, const std::string& context) {
  if (!j.is_number()) throw InvalidInput(context + " must be a number");
  return j.get<double>();
}

std::vector<double> read_double_vector(const json& j, const std::string& context) {
  if (!j.is_array()) throw InvalidInput(context + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& entry : j) out.push_back(read_double(entry, context + " entry"));
  return out;
}

std::vector<std::vector<double>> read_matrix(const json& j, const std::string& context) {
  if (!j.is_array()) throw InvalidInput(context + " must be an array of rows");
  std::vector<std::vector<double>> out;
  out.reserve(j.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    out.push_back(read_double_vector(j[r], context + " row " + std::to_string(r)));
  }
  return out;
}

FiniteMetricSpace space_from_json_object(const json& j, const std::string& context) {
  const int n = read_int(require_field(j, "size", context), context + " \"size\"");
  const auto rows = read_matrix(require_field(j, "dist", context), context + " \"dist\"");
  if (static_cast<int>(rows.size()) != n) {
    throw InvalidInput(context + " \"dist\" has " + std::to_string(rows.size()) +
                       " rows for size " + std::to_string(n));
  }
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != n) {
      throw InvalidInput(context + " \"dist\" row " + std::to_string(r) + " has " +
                         std::to_string(rows[r].size()) + " entries for size " +
                         std::to_string(n));
    }
    flat.insert(flat.end(), rows[r].begin(), rows[r].end());
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    const auto& jl = j.at("labels");
    if (!jl.is_array()) throw InvalidInput(context + " \"labels\" must be an array of strings");
    for (const auto& entry : jl) {
      if (!entry.is_string()) throw InvalidInput(context + " \"labels\" must be an array of strings");
      labels.push_back(entry.get<std::string>());
    }
  }
  std::vector<std::vector<double>> coords;
  if (j.contains("coords")) coords = read_matrix(j.at("coords"), context + " \"coords\"");
  return FiniteMetricSpace(n, std::move(flat), std::move(labels), std::move(coords));
}

std::string resolve_path(const std::string& ref, const std::string& base_dir) {
  const std::filesystem::path p(ref);
  if (p.is_absolute() || base_dir.empty()) return ref;
  return (std::filesystem::path(base_dir) / p).string();
}

// "space" field of a measure/stage: inline object or path string.
SpacePtr load_space_field(const json& j, const std::string& base_dir, const std::string& context) {
  if (j.is_string()) {
    const std::string path = resolve_path(j.get<std::string>(), base_dir);
    return std::make_shared<const FiniteMetricSpace>(
        space_from_json_object(parse_json(read_text_file(path), path), path));
  }
  if (j.is_object()) {
    return std::make_shared<const FiniteMetricSpace>(space_from_json_object(j, context));
  }
  throw InvalidInput(context + " \"space\" must be an inline object or a path string");
}

json space_to_json_object(const FiniteMetricSpace& space) {
  json j;
  j["size"] = space.size();
  json rows = json::array();
  for (int i = 0; i < space.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < space.size(); ++k) row.push_back(space.dist(i, k));
    rows.push_back(std::move(row));
  }
  j["dist"] = std::move(rows);
  if (space.has_labels()) j["labels"] = space.labels();
  if (space.has_coords()) j["coords"] = space.coords();
  return j;
}

StageDistance metric_from_json(const json& stage, const std::string& context) {
  const auto& jm = require_field(stage, "metric", context);
  if (!jm.is_string()) throw InvalidInput(context + " \"metric\" must be a string");
  const std::string name = jm.get<std::string>();
  StageDistance d;
  if (name == "wp") {
    d.kind = DistanceKind::kWasserstein;
    d.p = stage.contains("p") ? read_double(stage.at("p"), context + " \"p\"") : 1.0;
    if (!(d.p >= 1.0)) throw InvalidInput(context + " \"p\" must be at least 1");
  } else if (name == "winf") {
    d.kind = DistanceKind::kWassersteinInf;
  } else if (name == "lp") {
    d.kind = DistanceKind::kLevyProkhorov;
  } else {
    throw InvalidInput(context + " \"metric\" must be \"wp\", \"winf\", or \"lp\", got \"" +
                       name + "\"");
  }
  return d;
}

}  // namespace

std::string space_to_json(const FiniteMetricSpace& space) {
  return space_to_json_object(space).dump(2) + "\n";
}

FiniteMetricSpace space_from_json(const std::string& text) {
  return space_from_json_object(parse_json(text, "space"), "space");
}

std::string graph_to_json(const LengthGraph& graph) {
  json j;
  j["vertices"] = graph.vertices;
  json edges = json::array();
  for (const auto& e : graph.edges) {
    edges.push_back(json::array({e.u, e.v, e.length}));
  }
  j["edges"] = std::move(edges);
  if (!graph.coords.empty()) j["coords"] = graph.coords;
  return j.dump(2) + "\n";
}

LengthGraph graph_from_json(const std::string& text) {
  const json j = parse_json(text, "graph");
  LengthGraph graph;
  graph.vertices = read_int(require_field(j, "vertices", "graph"), "graph \"vertices\"");
  const auto& je = require_field(j, "edges", "graph");
  if (!je.is_array()) throw InvalidInput("graph \"edges\" must be an array");
  for (std::size_t r = 0; r < je.size(); ++r) {
    const std::string context = "graph edge " + std::to_string(r);
    const auto& entry = je[r];
    if (!entry.is_array() || entry.size() != 3) {
      throw InvalidInput(context + " must be [u, v, length]");
    }
    LengthGraph::Edge edge;
    edge.u = read_int(entry[0], context + " endpoint");
    edge.v = read_int(entry[1], context + " endpoint");
    edge.length = read_double(entry[2], context + " length");
    graph.edges.push_back(edge);
  }
  if (j.contains("coords")) graph.coords = read_matrix(j.at("coords"), "graph \"coords\"");
  check_graph(graph);
  return graph;
}

std::string measure_to_json(const ProbabilityMeasure& mu, const std::string& space_ref) {
  json j;
  j["space"] = space_ref.empty() ? space_to_json_object(*mu.space()) : json(space_ref);
  j["weights"] = mu.weights();
  return j.dump(2) + "\n";
}

ProbabilityMeasure measure_from_json(const std::string& text, const std::string& base_dir,
                                     SpacePtr expected) {
  const json j = parse_json(text, "measure");
  std::vector<double> weights =
      read_double_vector(require_field(j, "weights", "measure"), "measure \"weights\"");
  SpacePtr space;
  if (j.contains("space")) space = load_space_field(j.at("space"), base_dir, "measure");
  if (space && expected) {
    if (!space->same_metric_as(*expected)) {
      throw InvalidInput("the measure's space does not match the given space");
    }
    space = expected;
  } else if (!space) {
    if (!expected) throw InvalidInput("measure names no space and no space was supplied");
    space = std::move(expected);
  }
  return ProbabilityMeasure(std::move(space), std::move(weights));
}

InductiveSystem system_from_json(const std::string& text, const std::string& base_dir) {
  const json j = parse_json(text, "system");
  const auto& js = require_field(j, "stages", "system");
  if (!js.is_array() || js.empty()) {
    throw InvalidInput("system \"stages\" must be a nonempty array");
  }
  std::vector<Stage> stages;
  for (std::size_t k = 0; k < js.size(); ++k) {
    const std::string context = "system stage " + std::to_string(k);
    const auto& entry = js[k];
    Stage stage;
    stage.space = load_space_field(require_field(entry, "space", context), base_dir, context);
    stage.metric = metric_from_json(entry, context);
    stage.scale =
        entry.contains("scale") ? read_double(entry.at("scale"), context + " \"scale\"") : 1.0;
    stages.push_back(std::move(stage));
  }
  const auto& jm = require_field(j, "maps", "system");
  if (!jm.is_array() || jm.size() + 1 != js.size()) {
    throw InvalidInput("system \"maps\" must hold exactly one matrix per adjacent stage pair (" +
                       std::to_string(js.size() - 1) + " expected)");
  }
  std::vector<AffineStageMap> maps;
  for (std::size_t k = 0; k < jm.size(); ++k) {
    const std::string context = "system map " + std::to_string(k);
    const auto rows = read_matrix(jm[k], context);
    const SpacePtr& source = stages[k + 1].space;
    const SpacePtr& target = stages[k].space;
    if (static_cast<int>(rows.size()) != source->size()) {
      throw InvalidInput(context + " has " + std::to_string(rows.size()) +
                         " rows for a source stage of " + std::to_string(source->size()) +
                         " points");
    }
    std::vector<ProbabilityMeasure> images;
    images.reserve(rows.size());
    for (const auto& row : rows) images.emplace_back(target, row);
    maps.emplace_back(source, target, std::move(images));
  }
  return InductiveSystem(std::move(stages), std::move(maps));
}

MeasureThread thread_from_json(const std::string& text, const InductiveSystem& system) {
  const json j = parse_json(text, "thread");
  const auto rows = read_matrix(require_field(j, "weights", "thread"), "thread \"weights\"");
  if (static_cast<int>(rows.size()) != system.depth()) {
    throw InvalidInput("thread has " + std::to_string(rows.size()) +
                       " weight vectors for a system of " + std::to_string(system.depth()) +
                       " stages");
  }
  MeasureThread thread;
  thread.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    thread.emplace_back(system.stage(static_cast<int>(k)).space, rows[k]);
  }
  return thread;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

std::string file_digest(const std::string& path) {
  return "fnv1a64:" + to_hex(fnv1a64(read_text_file(path)));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw InvalidInput("cannot read file: " + path);
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot open file for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw InvalidInput("cannot write file: " + path);
}

}  // namespace mmd

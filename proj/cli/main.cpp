// mmdist — command-line front end for the measure-distance library.
//
// Subcommands:
//   gen         write example geometries (spaces or skeleton graphs) as JSON
//   dist        distance between two measures on a shared space
//   suite       inequality property suite on random instances
//   lyre        limit / tail metrics of an inductive system of simplices
//   gap         alignment certificate between two spaces
//   experiment  Monte Carlo concentration experiments to CSV + JSON
//   verify      cross-check the exact solvers against brute-force oracles
//
// Every command that writes --out also writes <out>.manifest.json recording
// the command, the fully resolved configuration, the seed, the tool version,
// digests of all input files, and the wall-clock time, so a run can be
// reproduced exactly from its manifest.
//
// Exit codes: 0 success; 1 a computation ran but a check failed;
// 2 malformed input, unknown flags, or a resource limit.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmdist/concentration.hpp"
#include "mmdist/errors.hpp"
#include "mmdist/gap.hpp"
#include "mmdist/generators.hpp"
#include "mmdist/inductive.hpp"
#include "mmdist/json_io.hpp"
#include "mmdist/length_graph.hpp"
#include "mmdist/measure.hpp"
#include "mmdist/metric_space.hpp"
#include "mmdist/oracles.hpp"
#include "mmdist/parallel.hpp"
#include "mmdist/rng.hpp"
#include "mmdist/transport.hpp"
#include "mmdist/version.hpp"

namespace {

using nlohmann::json;
using namespace mmd;

// ---------------------------------------------------------------------------
// Run context: input digests and the manifest written next to --out.

class RunContext {
 public:
  RunContext(std::string command, std::string out_path)
      : command_(std::move(command)), out_(std::move(out_path)) {}

  json& config() { return config_; }
  bool has_out() const { return !out_.empty(); }
  const std::string& out_path() const { return out_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }

  // Reads a file and remembers its digest for the manifest.
  std::string load_input(const std::string& path) {
    const std::string text = read_text_file(path);
    inputs_[path] = "fnv1a64:" + to_hex(fnv1a64(text));
    return text;
  }

  // Writes the named outputs, then the manifest (only when --out was given).
  void finish(const std::vector<std::pair<std::string, std::string>>& outputs) {
    for (const auto& [path, text] : outputs) write_text_file(path, text);
    if (out_.empty()) return;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json manifest;
    manifest["command"] = command_;
    manifest["config"] = config_;
    manifest["seed"] = seed_;
    manifest["version"] = kVersion;
    manifest["inputs"] = inputs_;
    manifest["wall_clock_seconds"] = wall;
    write_text_file(out_ + ".manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::string out_;
  json config_ = json::object();
  std::map<std::string, std::string> inputs_;
  std::uint64_t seed_ = 0;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string dir_of(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

// One number on its own line, JSON-formatted ("1.0", "0.25", ...).
void print_value(double v) { std::cout << json(v).dump() << "\n"; }

SpacePtr load_space(RunContext& ctx, const std::string& path, double tol) {
  auto space = std::make_shared<const FiniteMetricSpace>(space_from_json(ctx.load_input(path)));
  const ValidationReport report = validate_metric(*space, tol);
  if (!report.pass) {
    throw InvalidInput("space file " + path + " is not a metric: " + report.message);
  }
  return space;
}

ProbabilityMeasure load_measure(RunContext& ctx, const std::string& path, SpacePtr expected) {
  return measure_from_json(ctx.load_input(path), dir_of(path), std::move(expected));
}

// ---------------------------------------------------------------------------
// Random instances for `suite` and `verify`: off-diagonal entries drawn in
// [0.6, 1.2) * scale always satisfy the triangle inequality, so every draw
// is a genuine metric.

FiniteMetricSpace random_metric_space(Rng& rng, int n) {
  const double scale = 0.25 + 2.75 * rng.uniform();
  std::vector<double> d(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double v = scale * (0.6 + 0.6 * rng.uniform());
      d[static_cast<std::size_t>(i) * n + j] = v;
      d[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return FiniteMetricSpace(n, std::move(d));
}

ProbabilityMeasure random_full_measure(Rng& rng, const SpacePtr& space) {
  std::vector<double> w(static_cast<std::size_t>(space->size()));
  for (double& x : w) x = 0.05 + rng.uniform();
  return ProbabilityMeasure(space, std::move(w));
}

// ---------------------------------------------------------------------------
// gen

struct GenOpts {
  std::string kind;
  int n = 4;
  double r = 0.5;
  int level = 3;
  int k = 2;
  int mesh = 4;
  std::uint64_t seed = 0;
  bool intrinsic = false;
  std::string space;
  double eps = 0.0;
  double tol = 1e-9;
  std::string out;
};

int run_gen(const GenOpts& opt) {
  RunContext ctx("gen", opt.out);
  ctx.config()["kind"] = opt.kind;
  ctx.set_seed(opt.seed);

  std::string payload;
  std::string format = "space";
  if (opt.kind == "equidistant") {
    ctx.config()["n"] = opt.n;
    ctx.config()["r"] = opt.r;
    payload = space_to_json(gen_equidistant(opt.n, opt.r));
  } else if (opt.kind == "gasket" || opt.kind == "carpet") {
    ctx.config()["level"] = opt.level;
    ctx.config()["intrinsic"] = opt.intrinsic;
    const FractalKind fk = opt.kind == "gasket" ? FractalKind::kGasket : FractalKind::kCarpet;
    const LengthGraph g = gen_sierpinski(fk, opt.level);
    if (opt.intrinsic) {
      payload = space_to_json(intrinsic_metric(g));
    } else {
      payload = graph_to_json(g);
      format = "graph";
    }
  } else if (opt.kind == "simplex-sphere" || opt.kind == "simplex-ball") {
    ctx.config()["k"] = opt.k;
    ctx.config()["mesh"] = opt.mesh;
    const SimplicialKind sk =
        opt.kind == "simplex-sphere" ? SimplicialKind::kSphere : SimplicialKind::kBall;
    payload = space_to_json(gen_simplicial(sk, opt.k, opt.mesh));
  } else if (opt.kind == "sphere-sample") {
    ctx.config()["k"] = opt.k;
    ctx.config()["n"] = opt.n;
    payload = space_to_json(gen_sphere_sample(opt.k, opt.n, opt.seed));
  } else if (opt.kind == "net") {
    if (opt.space.empty()) throw InvalidInput("gen --kind net needs --space");
    if (opt.eps <= 0.0) throw InvalidInput("gen --kind net needs a positive --eps");
    ctx.config()["space"] = opt.space;
    ctx.config()["eps"] = opt.eps;
    const SpacePtr base = load_space(ctx, opt.space, opt.tol);
    const std::vector<int> net = eps_net(*base, opt.eps);
    // Net points remember their origin through labels.
    std::vector<std::string> labels = base->labels();
    if (labels.empty()) {
      for (int i = 0; i < base->size(); ++i) labels.push_back(std::to_string(i));
    }
    const FiniteMetricSpace labeled(base->size(), base->dist_matrix(), std::move(labels),
                                    base->coords());
    payload = space_to_json(subspace(labeled, net));
    ctx.config()["net_indices"] = net;
    std::cout << json(net).dump() << "\n";
  } else {
    throw InvalidInput("unknown gen kind \"" + opt.kind +
                       "\" (expected equidistant, gasket, carpet, simplex-sphere, "
                       "simplex-ball, sphere-sample, or net)");
  }
  ctx.config()["format"] = format;

  if (ctx.has_out()) {
    ctx.finish({{ctx.out_path(), payload}});
  } else {
    std::cout << payload;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// dist

struct DistOpts {
  std::string metric;
  double p = 1.0;
  std::string space;
  std::string mu;
  std::string nu;
  bool witness = false;
  double tol = 1e-9;
  std::string out;
};

json coupling_to_json(const Coupling& c) {
  json j;
  j["row_points"] = c.row_points;
  j["col_points"] = c.col_points;
  json plan = json::array();
  for (std::size_t r = 0; r < c.row_points.size(); ++r) {
    json row = json::array();
    for (std::size_t s = 0; s < c.col_points.size(); ++s) {
      row.push_back(c.plan[r * c.col_points.size() + s]);
    }
    plan.push_back(std::move(row));
  }
  j["plan"] = std::move(plan);
  return j;
}

int run_dist(const DistOpts& opt) {
  RunContext ctx("dist", opt.out);
  std::string name = opt.metric;
  double p = opt.p;
  if (name == "w1") {
    name = "wp";
    p = 1.0;
  } else if (name == "w2") {
    name = "wp";
    p = 2.0;
  }
  if (name != "wp" && name != "winf" && name != "lp") {
    throw InvalidInput("unknown metric \"" + opt.metric +
                       "\" (expected w1, w2, wp, winf, or lp)");
  }
  if (name == "wp" && !(std::isfinite(p) && p >= 1.0)) {
    throw InvalidInput("--p must be a finite number >= 1");
  }

  const SpacePtr space = load_space(ctx, opt.space, opt.tol);
  const ProbabilityMeasure mu = load_measure(ctx, opt.mu, space);
  const ProbabilityMeasure nu = load_measure(ctx, opt.nu, space);

  ctx.config()["metric"] = name;
  if (name == "wp") ctx.config()["p"] = p;
  ctx.config()["space"] = opt.space;
  ctx.config()["mu"] = opt.mu;
  ctx.config()["nu"] = opt.nu;
  ctx.config()["witness"] = opt.witness;
  ctx.config()["tol"] = opt.tol;

  json result;
  result["metric"] = name;
  if (name == "wp") {
    const TransportResult r = wasserstein_p(mu, nu, p);
    result["p"] = p;
    result["value"] = r.value;
    if (opt.witness) result["witness"] = coupling_to_json(r.witness);
  } else if (name == "winf") {
    const TransportResult r = wasserstein_inf(mu, nu);
    result["value"] = r.value;
    if (opt.witness) result["witness"] = coupling_to_json(r.witness);
  } else {
    result["value"] = levy_prokhorov(mu, nu);
    if (opt.witness) {
      std::cerr << "note: the Levy-Prokhorov solver reports no witness\n";
    }
  }

  if (opt.witness) {
    std::cout << result.dump(2) << "\n";
  } else {
    print_value(result["value"].get<double>());
  }
  if (ctx.has_out()) ctx.finish({{ctx.out_path(), result.dump(2) + "\n"}});
  return 0;
}

// ---------------------------------------------------------------------------
// suite

struct SuiteOpts {
  int trials = 100;
  int max_points = 15;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  int jobs = 1;
  std::string out;
};

int run_suite(const SuiteOpts& opt) {
  if (opt.trials < 1) throw InvalidInput("--trials must be positive");
  if (opt.max_points < 2) throw InvalidInput("--max-points must be at least 2");
  if (opt.jobs < 1) throw InvalidInput("--jobs must be positive");
  RunContext ctx("suite", opt.out);
  ctx.set_seed(opt.seed);
  ctx.config() = {{"trials", opt.trials},
                  {"max_points", opt.max_points},
                  {"seed", opt.seed},
                  {"tol", opt.tol},
                  {"jobs", opt.jobs}};

  // Violation of "lhs <= rhs" measured as lhs - rhs; positive beyond tol
  // fails.  One slot per instance and inequality, folded afterwards.
  static constexpr const char* kTags[] = {"wincrease", "wholder", "lpsquare", "lplinear",
                                          "winfdominates"};
  constexpr int kChecks = 5;
  std::vector<std::array<double, kChecks>> violations(static_cast<std::size_t>(opt.trials));

  parallel_for(static_cast<std::size_t>(opt.trials), static_cast<unsigned>(opt.jobs),
               [&](std::size_t t) {
    Rng rng(sub_seed(opt.seed, t));
    const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(opt.max_points - 1)));
    const auto space = std::make_shared<const FiniteMetricSpace>(random_metric_space(rng, n));
    const ProbabilityMeasure mu = random_full_measure(rng, space);
    const ProbabilityMeasure nu = random_full_measure(rng, space);
    const double diam = space->diameter();
    const double w1 = wasserstein_p(mu, nu, 1.0).value;
    const double w2 = wasserstein_p(mu, nu, 2.0).value;
    const double w4 = wasserstein_p(mu, nu, 4.0).value;
    const double winf = wasserstein_inf(mu, nu).value;
    const double lp = levy_prokhorov(mu, nu);
    auto& v = violations[t];
    v[0] = std::max({w1 - w2, w2 - w4, w4 - winf});
    v[1] = std::max(w2 - std::sqrt(diam) * std::sqrt(w1),
                    w4 - std::pow(diam, 0.75) * std::pow(w1, 0.25));
    v[2] = lp * lp - w1;
    v[3] = w1 - (diam + 1.0) * lp;
    v[4] = lp - winf;
  });

  bool all_pass = true;
  json checks = json::array();
  std::printf("%-14s %10s %16s   %s\n", "inequality", "instances", "max violation", "result");
  for (int c = 0; c < kChecks; ++c) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& v : violations) worst = std::max(worst, v[static_cast<std::size_t>(c)]);
    const bool pass = worst <= opt.tol;
    all_pass = all_pass && pass;
    std::printf("%-14s %10d %16.3e   %s\n", kTags[c], opt.trials, worst,
                pass ? "pass" : "FAIL");
    checks.push_back({{"tag", kTags[c]}, {"max_violation", worst}, {"pass", pass}});
  }

  if (ctx.has_out()) {
    json summary = {{"trials", opt.trials}, {"tol", opt.tol}, {"pass", all_pass},
                    {"checks", checks}};
    ctx.finish({{ctx.out_path(), summary.dump(2) + "\n"}});
  }
  if (!all_pass) throw CheckFailure("inequality suite failed");
  return 0;
}

// ---------------------------------------------------------------------------
// lyre

struct LyreOpts {
  std::string system;
  std::string sigma;
  std::string tau;
  bool pro_winf = false;
  int depth = 0;  // 0 = all stages
  std::string out;
};

int run_lyre(const LyreOpts& opt) {
  RunContext ctx("lyre", opt.out);
  ctx.config() = {{"system", opt.system}, {"sigma", opt.sigma}, {"tau", opt.tau},
                  {"pro_winf", opt.pro_winf}, {"depth", opt.depth}};

  InductiveSystem system = system_from_json(ctx.load_input(opt.system), dir_of(opt.system));
  std::string sigma_text = ctx.load_input(opt.sigma);
  std::string tau_text = ctx.load_input(opt.tau);

  if (opt.depth != 0) {
    if (opt.depth < 1 || opt.depth > system.depth()) {
      throw InvalidInput("--depth must be between 1 and the system's stage count (" +
                         std::to_string(system.depth()) + ")");
    }
    std::vector<Stage> stages;
    std::vector<AffineStageMap> maps;
    for (int k = 0; k < opt.depth; ++k) stages.push_back(system.stage(k));
    for (int k = 0; k + 1 < opt.depth; ++k) maps.push_back(system.connecting_map(k));
    system = InductiveSystem(std::move(stages), std::move(maps));
    // Threads may carry entries for the stages that were cut off; keep the
    // first `depth` weight vectors of each before handing them over.
    const auto truncate = [&](const std::string& text, const std::string& which) {
      json j;
      try {
        j = json::parse(text);
      } catch (const json::exception& e) {
        throw InvalidInput("malformed JSON (" + which + " thread): " + e.what());
      }
      if (j.is_object() && j.contains("weights") && j["weights"].is_array() &&
          j["weights"].size() > static_cast<std::size_t>(opt.depth)) {
        json cut = json::array();
        for (int k = 0; k < opt.depth; ++k) cut.push_back(j["weights"][static_cast<std::size_t>(k)]);
        j["weights"] = std::move(cut);
      }
      return j.dump();
    };
    sigma_text = truncate(sigma_text, "sigma");
    tau_text = truncate(tau_text, "tau");
  }

  const MeasureThread sigma = thread_from_json(sigma_text, system);
  const MeasureThread tau = thread_from_json(tau_text, system);

  json result;
  if (opt.pro_winf) {
    const ProWinfResult r = pro_winf(system, sigma, tau);
    result["value"] = r.value;
    result["stage_values"] = r.stage_values;
    std::cout << result.dump(2) << "\n";
  } else {
    result["value"] = limit_metric(system, sigma, tau);
    print_value(result["value"].get<double>());
  }
  if (ctx.has_out()) ctx.finish({{ctx.out_path(), result.dump(2) + "\n"}});
  return 0;
}

// ---------------------------------------------------------------------------
// gap

struct GapOpts {
  std::string space;
  std::string other;
  double eps = 0.0;
  int samples = 64;
  std::uint64_t seed = 0;
  std::string pairs;
  bool gh = false;
  double tol = 1e-9;
  std::string out;
};

json map_to_json(const AffineStageMap& map) {
  json rows = json::array();
  for (int i = 0; i < map.source()->size(); ++i) {
    rows.push_back(map.image_of(i).weights());
  }
  return rows;
}

int run_gap(const GapOpts& opt) {
  RunContext ctx("gap", opt.out);
  ctx.set_seed(opt.seed);
  ctx.config() = {{"space", opt.space}, {"other", opt.other}, {"eps", opt.eps},
                  {"samples", opt.samples}, {"seed", opt.seed}, {"tol", opt.tol},
                  {"gh", opt.gh}};

  const SpacePtr first = load_space(ctx, opt.space, opt.tol);
  const SpacePtr second = load_space(ctx, opt.other, opt.tol);

  Correspondence corr;
  if (!opt.pairs.empty()) {
    ctx.config()["pairs"] = opt.pairs;
    const json j = json::parse(ctx.load_input(opt.pairs), nullptr, false);
    if (j.is_discarded() || !j.is_array()) {
      throw InvalidInput("pairs file must be a JSON array of [i, j] pairs");
    }
    for (const auto& entry : j) {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_integer() ||
          !entry[1].is_number_integer()) {
        throw InvalidInput("pairs file must be a JSON array of [i, j] pairs");
      }
      corr.emplace_back(entry[0].get<int>(), entry[1].get<int>());
    }
  }

  const StageDistance w1{DistanceKind::kWasserstein, 1.0};
  const GapCertificate cert =
      gamma_q_upper(first, w1, second, w1, opt.eps, opt.samples, opt.seed, corr);

  json result;
  result["eps"] = opt.eps;
  result["epsilon_bound"] = cert.epsilon_bound;
  result["isometry_defect"] = cert.isometry_defect;
  result["invertibility_defect"] = cert.invertibility_defect;
  result["within_target"] = cert.epsilon_bound <= opt.eps;
  result["forward"] = map_to_json(cert.forward);
  result["backward"] = map_to_json(cert.backward);
  if (opt.gh) {
    result["gromov_hausdorff"] = gromov_hausdorff_small(*first, *second);
  }

  std::cout << result.dump(2) << "\n";
  if (ctx.has_out()) ctx.finish({{ctx.out_path(), result.dump(2) + "\n"}});
  return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentOpts {
  std::string kind;
  int k = 10;
  std::int64_t trials = 0;  // 0 = kind default
  std::uint64_t seed = 0;
  std::int64_t n = 100;
  std::vector<double> eps;
  std::string function = "";
  std::string space;
  std::string mu;
  int jobs = 1;
  std::string out;
};

TestFunction parse_function(const std::string& text, int k) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "coordinate") {
    try {
      return coordinate_function(arg.empty() ? 0 : std::stoi(arg));
    } catch (const std::exception&) {
      throw InvalidInput("bad coordinate axis \"" + arg + "\"");
    }
  }
  if (head == "constant") {
    try {
      return constant_function(arg.empty() ? 0.0 : std::stod(arg));
    } catch (const std::exception&) {
      throw InvalidInput("bad constant value \"" + arg + "\"");
    }
  }
  if (head == "distance") {
    std::vector<double> point(static_cast<std::size_t>(k), 0.0);
    if (arg == "north" || arg.empty()) {
      point[0] = 1.0;
    } else if (arg == "diagonal") {
      for (double& c : point) c = 1.0 / std::sqrt(static_cast<double>(k));
    } else {
      throw InvalidInput("bad distance anchor \"" + arg + "\" (expected north or diagonal)");
    }
    return distance_function(std::move(point));
  }
  throw InvalidInput("unknown observable \"" + text +
                     "\" (expected coordinate:<axis>, distance:north, distance:diagonal, "
                     "or constant:<value>)");
}

std::string csv_row(const std::string& trial, double statistic, double bound, bool pass) {
  return trial + "," + json(statistic).dump() + "," + json(bound).dump() + "," +
         (pass ? "true" : "false") + "\n";
}

int run_experiment(const ExperimentOpts& opt) {
  RunContext ctx("experiment", opt.out);
  ctx.set_seed(opt.seed);
  json& cfg = ctx.config();
  cfg["kind"] = opt.kind;
  cfg["seed"] = opt.seed;
  cfg["jobs"] = opt.jobs;

  std::string csv = "trial,statistic,bound,pass\n";
  json summary;
  summary["kind"] = opt.kind;
  summary["seed"] = opt.seed;
  bool pass = true;

  if (opt.kind == "variance") {
    const std::int64_t trials = opt.trials > 0 ? opt.trials : 100000;
    std::vector<TestFunction> functions;
    if (opt.function.empty() || opt.function == "builtins") {
      functions = builtin_test_functions(opt.k);
    } else {
      functions.push_back(parse_function(opt.function, opt.k));
    }
    cfg["k"] = opt.k;
    cfg["trials"] = trials;
    const TrialResult r = variance_experiment(opt.k, functions, trials, opt.seed, opt.jobs);
    pass = r.pass;
    json rows = json::array();
    for (std::size_t j = 0; j < functions.size(); ++j) {
      const bool fn_pass = r.statistics[j] <= r.bound + 3.0 * r.stderrs[j];
      const std::string label = test_function_label(functions[j]);
      csv += csv_row(label, r.statistics[j], r.bound, fn_pass);
      rows.push_back({{"function", label}, {"variance", r.statistics[j]},
                      {"stderr", r.stderrs[j]}, {"pass", fn_pass}});
    }
    summary["k"] = opt.k;
    summary["trials"] = trials;
    summary["bound"] = r.bound;
    summary["functions"] = rows;
    summary["pass"] = r.pass;
  } else if (opt.kind == "sanov") {
    if (opt.space.empty() || opt.mu.empty()) {
      throw InvalidInput("sanov needs --space and --mu");
    }
    if (opt.eps.size() > 1) throw InvalidInput("sanov takes exactly one --eps");
    const double eps = opt.eps.empty() ? 0.1 : opt.eps.front();
    const std::int64_t trials = opt.trials > 0 ? opt.trials : 10000;
    const SpacePtr space = load_space(ctx, opt.space, 1e-9);
    const ProbabilityMeasure mu = load_measure(ctx, opt.mu, space);
    cfg["space"] = opt.space;
    cfg["mu"] = opt.mu;
    cfg["n"] = opt.n;
    cfg["eps"] = eps;
    cfg["trials"] = trials;
    const TrialResult r = sanov_experiment(space, mu, opt.n, eps, trials, opt.seed, opt.jobs);
    pass = r.pass;
    if (!r.warning.empty()) std::cerr << "warning: " << r.warning << "\n";
    for (std::size_t t = 0; t < r.statistics.size(); ++t) {
      csv += csv_row(std::to_string(t), r.statistics[t], r.bound, r.statistics[t] < eps);
    }
    const double diam = space->diameter();
    summary["n"] = opt.n;
    summary["eps"] = eps;
    summary["trials"] = trials;
    summary["empirical_probability"] = r.empirical_probability;
    summary["stderr"] = r.stderrs.front();
    summary["bound"] = r.bound;
    // The stated bound; the large-deviation rate itself is twice as strong,
    // so report the margin against that too.
    summary["stronger_bound"] =
        std::exp(-2.0 * static_cast<double>(opt.n) * eps * eps / (diam * diam));
    summary["pass"] = r.pass;
    if (!r.warning.empty()) summary["warning"] = r.warning;
  } else if (opt.kind == "median") {
    const std::int64_t trials = opt.trials > 0 ? opt.trials : 20000;
    const std::vector<double> grid =
        opt.eps.empty() ? std::vector<double>{0.1, 0.2, 0.3, 0.4, 0.5} : opt.eps;
    const TestFunction f =
        parse_function(opt.function.empty() ? "coordinate:0" : opt.function, opt.k);
    cfg["k"] = opt.k;
    cfg["trials"] = trials;
    cfg["eps"] = grid;
    cfg["function"] = opt.function.empty() ? "coordinate:0" : opt.function;
    const TrialResult r = median_concentration(opt.k, f, grid, trials, opt.seed, opt.jobs);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      // The bound column carries the Gaussian-heuristic reference
      // 2 exp(-k eps^2 / 2); it is reported, never asserted.
      const double reference =
          2.0 * std::exp(-static_cast<double>(opt.k) * grid[i] * grid[i] / 2.0);
      csv += csv_row(json(grid[i]).dump(), r.statistics[i], reference, true);
    }
    summary["k"] = opt.k;
    summary["trials"] = trials;
    summary["eps_grid"] = grid;
    summary["tails"] = r.statistics;
    summary["stderrs"] = r.stderrs;
    summary["decay_rate"] = r.decay_rate;
    summary["pass"] = true;
  } else {
    throw InvalidInput("unknown experiment kind \"" + opt.kind +
                       "\" (expected variance, sanov, or median)");
  }

  std::cout << summary.dump(2) << "\n";
  if (ctx.has_out()) {
    ctx.finish({{ctx.out_path(), csv},
                {ctx.out_path() + ".summary.json", summary.dump(2) + "\n"}});
  }
  if (!pass) throw CheckFailure("experiment bound violated (see summary)");
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOpts {
  bool all = false;
  std::vector<std::string> checks;
  int trials = 100;
  std::uint64_t seed = 7;
  int jobs = 1;
  std::string out;
};

struct OracleCheck {
  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;
  bool pass = true;
};

// Max |solver - oracle| over `trials` random instances, one stream per index.
template <typename Fn>
OracleCheck run_oracle_check(const std::string& name, double tolerance, int trials,
                             std::uint64_t seed, int jobs, Fn&& instance_delta) {
  std::vector<double> deltas(static_cast<std::size_t>(trials), 0.0);
  parallel_for(static_cast<std::size_t>(trials), static_cast<unsigned>(jobs),
               [&](std::size_t t) {
    Rng rng(sub_seed(seed, t));
    deltas[t] = instance_delta(rng);
  });
  OracleCheck check;
  check.name = name;
  check.tolerance = tolerance;
  for (double d : deltas) check.worst = std::max(check.worst, d);
  check.pass = check.worst <= tolerance;
  return check;
}

int run_verify(const VerifyOpts& opt) {
  if (opt.trials < 1) throw InvalidInput("--trials must be positive");
  if (opt.jobs < 1) throw InvalidInput("--jobs must be positive");
  RunContext ctx("verify", opt.out);
  ctx.set_seed(opt.seed);

  std::vector<std::string> selected = opt.checks;
  if (selected.empty() || opt.all) {
    selected = {"wp-vertices", "bottleneck", "lp-subset", "w1-dual"};
  }
  ctx.config() = {{"checks", selected}, {"trials", opt.trials}, {"seed", opt.seed},
                  {"jobs", opt.jobs}};

  std::vector<OracleCheck> results;
  for (const std::string& name : selected) {
    const std::uint64_t stream = sub_seed(opt.seed, fnv1a64(name));
    if (name == "wp-vertices") {
      results.push_back(run_oracle_check(name, 1e-9, opt.trials, stream, opt.jobs,
                                         [](Rng& rng) {
        const auto space = std::make_shared<const FiniteMetricSpace>(
            random_metric_space(rng, 2 + static_cast<int>(rng.below(3))));
        const auto mu = random_full_measure(rng, space);
        const auto nu = random_full_measure(rng, space);
        const double p = 1.0 + static_cast<double>(rng.below(3));
        return std::abs(wasserstein_p(mu, nu, p).value - transport_vertices(mu, nu, p));
      }));
    } else if (name == "bottleneck") {
      results.push_back(run_oracle_check(name, 0.0, opt.trials, stream, opt.jobs,
                                         [](Rng& rng) {
        const auto space = std::make_shared<const FiniteMetricSpace>(
            random_metric_space(rng, 10));
        const int n = 1 + static_cast<int>(rng.below(7));
        std::vector<int> xs, ys;
        for (int i = 0; i < n; ++i) {
          xs.push_back(static_cast<int>(rng.below(10)));
          ys.push_back(static_cast<int>(rng.below(10)));
        }
        return std::abs(bottleneck_match(*space, xs, ys).value -
                        bottleneck_bruteforce(*space, xs, ys).value);
      }));
    } else if (name == "lp-subset") {
      results.push_back(run_oracle_check(name, 2e-4, opt.trials, stream, opt.jobs,
                                         [](Rng& rng) {
        const auto space = std::make_shared<const FiniteMetricSpace>(
            random_metric_space(rng, 2 + static_cast<int>(rng.below(4))));
        const auto mu = random_full_measure(rng, space);
        const auto nu = random_full_measure(rng, space);
        return std::abs(levy_prokhorov(mu, nu) - lp_subset_oracle(mu, nu));
      }));
    } else if (name == "w1-dual") {
      results.push_back(run_oracle_check(name, 1e-8, opt.trials, stream, opt.jobs,
                                         [](Rng& rng) {
        const auto space = std::make_shared<const FiniteMetricSpace>(
            random_metric_space(rng, 2 + static_cast<int>(rng.below(11))));
        const auto mu = random_full_measure(rng, space);
        const auto nu = random_full_measure(rng, space);
        return std::abs(wasserstein_1_dual(mu, nu).value - wasserstein_p(mu, nu, 1.0).value);
      }));
    } else {
      throw InvalidInput("unknown check \"" + name +
                         "\" (expected wp-vertices, bottleneck, lp-subset, or w1-dual)");
    }
  }

  bool all_pass = true;
  json rows = json::array();
  for (const OracleCheck& c : results) {
    all_pass = all_pass && c.pass;
    std::printf("%s  %-12s %6d instances   max |delta| = %.3e   (tolerance %.0e)\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), opt.trials, c.worst, c.tolerance);
    rows.push_back({{"check", c.name}, {"max_delta", c.worst}, {"tolerance", c.tolerance},
                    {"pass", c.pass}});
  }
  if (ctx.has_out()) {
    json summary = {{"trials", opt.trials}, {"pass", all_pass}, {"checks", rows}};
    ctx.finish({{ctx.out_path(), summary.dump(2) + "\n"}});
  }
  if (!all_pass) throw CheckFailure("oracle cross-checks failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distances between probability measures on finite metric spaces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenOpts gen_opts;
  CLI::App* gen = app.add_subcommand("gen", "generate an example geometry as JSON");
  gen->add_option("--kind", gen_opts.kind,
                  "equidistant | gasket | carpet | simplex-sphere | simplex-ball | "
                  "sphere-sample | net")
      ->required();
  gen->add_option("--n", gen_opts.n, "point count (equidistant, sphere-sample)");
  gen->add_option("--r", gen_opts.r, "radius: equidistant points sit at mutual distance 2r");
  gen->add_option("--level,--depth", gen_opts.level, "subdivision level (gasket, carpet)");
  gen->add_option("--k", gen_opts.k, "dimension (simplex grids, sphere-sample)");
  gen->add_option("--mesh", gen_opts.mesh, "barycentric mesh denominator (simplex grids)");
  gen->add_option("--seed", gen_opts.seed, "random seed (sphere-sample)");
  gen->add_flag("--intrinsic", gen_opts.intrinsic,
                "emit the shortest-path metric space instead of the skeleton graph");
  gen->add_option("--space", gen_opts.space, "input space file (net)");
  gen->add_option("--eps", gen_opts.eps, "net radius (net)");
  gen->add_option("--tol", gen_opts.tol, "metric validation tolerance for --space");
  gen->add_option("--out", gen_opts.out, "output file (stdout when omitted)");

  DistOpts dist_opts;
  CLI::App* dist = app.add_subcommand("dist", "distance between two measures on one space");
  dist->add_option("--metric", dist_opts.metric, "w1 | w2 | wp | winf | lp")->required();
  dist->add_option("--p", dist_opts.p, "order for --metric wp (>= 1)");
  dist->add_option("--space", dist_opts.space, "space JSON file")->required();
  dist->add_option("--mu", dist_opts.mu, "first measure JSON file")->required();
  dist->add_option("--nu", dist_opts.nu, "second measure JSON file")->required();
  dist->add_flag("--witness", dist_opts.witness, "print the optimal coupling too");
  dist->add_option("--tol", dist_opts.tol, "metric validation tolerance");
  dist->add_option("--out", dist_opts.out, "write the result JSON here");

  SuiteOpts suite_opts;
  CLI::App* suite = app.add_subcommand(
      "suite", "check the distance inequality chain on random instances");
  suite->add_option("--trials", suite_opts.trials, "number of random instances");
  suite->add_option("--max-points", suite_opts.max_points, "largest space size");
  suite->add_option("--seed", suite_opts.seed, "master seed");
  suite->add_option("--tol", suite_opts.tol, "allowed violation");
  suite->add_option("--jobs", suite_opts.jobs, "worker threads");
  suite->add_option("--out", suite_opts.out, "write the summary JSON here");

  LyreOpts lyre_opts;
  CLI::App* lyre = app.add_subcommand(
      "lyre", "evaluate limit metrics of an inductive system of measure simplices");
  lyre->add_option("--system", lyre_opts.system, "system JSON file")->required();
  lyre->add_option("--sigma", lyre_opts.sigma, "first thread JSON file")->required();
  lyre->add_option("--tau", lyre_opts.tau, "second thread JSON file")->required();
  lyre->add_flag("--pro-winf", lyre_opts.pro_winf,
                 "tail max of stage infinity-order distances instead of the sup");
  lyre->add_option("--depth", lyre_opts.depth, "use only the first DEPTH stages");
  lyre->add_option("--out", lyre_opts.out, "write the result JSON here");

  GapOpts gap_opts;
  CLI::App* gap = app.add_subcommand(
      "gap", "certify an approximate isometry between two spaces' measure simplices");
  gap->add_option("--space", gap_opts.space, "first space JSON file")->required();
  gap->add_option("--other", gap_opts.other, "second space JSON file")->required();
  gap->add_option("--eps", gap_opts.eps, "target certificate scale (> 0)")->required();
  gap->add_option("--samples", gap_opts.samples, "random mixture pairs per side");
  gap->add_option("--seed", gap_opts.seed, "master seed");
  gap->add_option("--pairs", gap_opts.pairs, "JSON file with explicit [i, j] correspondence");
  gap->add_flag("--gh", gap_opts.gh, "also report the exact Gromov-Hausdorff distance (<= 6 points)");
  gap->add_option("--tol", gap_opts.tol, "metric validation tolerance");
  gap->add_option("--out", gap_opts.out, "write the certificate JSON here");

  ExperimentOpts exp_opts;
  CLI::App* experiment = app.add_subcommand(
      "experiment", "Monte Carlo concentration experiments (CSV + summary JSON)");
  experiment->add_option("--kind", exp_opts.kind, "variance | sanov | median")->required();
  experiment->add_option("--k", exp_opts.k, "sphere dimension (variance, median)");
  experiment->add_option("--trials", exp_opts.trials, "repetitions (0 = kind default)");
  experiment->add_option("--seed", exp_opts.seed, "master seed");
  experiment->add_option("--n", exp_opts.n, "sample size per trial (sanov)");
  experiment->add_option("--eps", exp_opts.eps,
                         "deviation level(s): one for sanov, a grid for median");
  experiment->add_option("--function", exp_opts.function,
                         "observable: coordinate:<axis>, distance:north, distance:diagonal, "
                         "constant:<v>; variance default: all builtins");
  experiment->add_option("--space", exp_opts.space, "space JSON file (sanov)");
  experiment->add_option("--mu", exp_opts.mu, "base measure JSON file (sanov)");
  experiment->add_option("--jobs", exp_opts.jobs, "worker threads for the trials");
  experiment->add_option("--out", exp_opts.out, "CSV path; also writes <out>.summary.json");

  VerifyOpts verify_opts;
  CLI::App* verify = app.add_subcommand(
      "verify", "cross-check exact solvers against brute-force oracles");
  verify->add_flag("--all", verify_opts.all, "run every check (default when none named)");
  verify->add_option("--checks", verify_opts.checks,
                     "subset of: wp-vertices bottleneck lp-subset w1-dual");
  verify->add_option("--trials", verify_opts.trials, "instances per check");
  verify->add_option("--seed", verify_opts.seed, "master seed");
  verify->add_option("--jobs", verify_opts.jobs, "worker threads");
  verify->add_option("--out", verify_opts.out, "write the summary JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return 2;
  }

  try {
    if (gen->parsed()) return run_gen(gen_opts);
    if (dist->parsed()) return run_dist(dist_opts);
    if (suite->parsed()) return run_suite(suite_opts);
    if (lyre->parsed()) return run_lyre(lyre_opts);
    if (gap->parsed()) return run_gap(gap_opts);
    if (experiment->parsed()) return run_experiment(exp_opts);
    if (verify->parsed()) return run_verify(verify_opts);
  } catch (const CheckFailure& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

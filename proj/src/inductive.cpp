// inductive.cpp — affine stage maps, inductive systems, and limit metrics.

#include "mmdist/inductive.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <utility>

#include "mmdist/errors.hpp"
#include "mmdist/rng.hpp"

namespace mmd {

namespace {

// Above this many dirac pairs the nonexpansiveness check samples pairs
// instead of enumerating all of them.
constexpr std::int64_t kMaxExhaustiveDiracPairs = 400;

// Pairs closer than this on the source side are skipped when forming
// expansion ratios: the transport solvers carry an absolute error floor, so
// ratios at vanishing distances measure noise, not the map.
constexpr double kDegeneratePairCutoff = 1e-9;

// Mixture pairs sampled per connecting map at system construction (on top of
// the dirac pairs).
constexpr int kConstructionSamples = 16;

constexpr double kEquidistantTol = 1e-12;
constexpr double kVertexMatchTol = 1e-12;
constexpr double kCoordSumTol = 1e-9;

void require_equidistant(const FiniteMetricSpace& space, const char* role) {
  const int n = space.size();
  if (n < 2) return;
  const double d0 = space.dist(0, 1);
  const double tol = kEquidistantTol * std::max(1.0, d0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(space.dist(i, j) - d0) > tol) {
        std::ostringstream msg;
        msg << role << " space is not equidistant: d(" << i << "," << j << ") = "
            << space.dist(i, j) << " but d(0,1) = " << d0;
        throw InvalidInput(msg.str());
      }
    }
  }
}

// Checks that every point of `grid` carries a barycentric coordinate vector:
// `dim` entries, nonnegative, summing to 1.
void require_barycentric(const FiniteMetricSpace& grid, int dim, const char* role) {
  if (!grid.has_coords()) {
    std::ostringstream msg;
    msg << role << " space carries no barycentric coordinates";
    throw InvalidInput(msg.str());
  }
  const auto& coords = grid.coords();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto& c = coords[i];
    if (c.size() != static_cast<std::size_t>(dim)) {
      std::ostringstream msg;
      msg << role << " coordinates have " << c.size() << " entries, expected " << dim;
      throw InvalidInput(msg.str());
    }
    double sum = 0.0;
    for (double v : c) {
      if (!(v >= -kVertexMatchTol)) {
        std::ostringstream msg;
        msg << role << " point " << i << " has a negative barycentric coordinate (" << v
            << ")";
        throw InvalidInput(msg.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kCoordSumTol) {
      std::ostringstream msg;
      msg << role << " point " << i << " has barycentric coordinates summing to " << sum;
      throw InvalidInput(msg.str());
    }
  }
}

// Index of the grid point sitting at barycentric vertex e_j, for each j.
std::vector<int> vertex_indices(const FiniteMetricSpace& grid, int dim, const char* role) {
  std::vector<int> result(static_cast<std::size_t>(dim), -1);
  const auto& coords = grid.coords();
  for (int j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      bool match = true;
      for (int t = 0; t < dim && match; ++t) {
        const double want = (t == j) ? 1.0 : 0.0;
        match = std::abs(coords[i][static_cast<std::size_t>(t)] - want) <= kVertexMatchTol;
      }
      if (match) {
        result[static_cast<std::size_t>(j)] = static_cast<int>(i);
        break;
      }
    }
    if (result[static_cast<std::size_t>(j)] < 0) {
      std::ostringstream msg;
      msg << role << " space has no point at barycentric vertex e_" << j;
      throw InvalidInput(msg.str());
    }
  }
  return result;
}

ProbabilityMeasure random_full_support_measure(const SpacePtr& space, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(space->size()));
  // The floor keeps every point in the support so sampled pairs stay well
  // separated from the degenerate-pair cutoff.
  for (double& v : w) v = 0.01 + rng.uniform();
  return ProbabilityMeasure(space, std::move(w));
}

void validate_thread(const InductiveSystem& system, const MeasureThread& thread,
                     const char* which) {
  if (thread.size() != static_cast<std::size_t>(system.depth())) {
    std::ostringstream msg;
    msg << which << " thread has " << thread.size() << " measures for a system of depth "
        << system.depth();
    throw InvalidInput(msg.str());
  }
  for (int k = 0; k < system.depth(); ++k) {
    if (!thread[static_cast<std::size_t>(k)].space()->same_metric_as(
            *system.stage(k).space)) {
      std::ostringstream msg;
      msg << which << " thread entry " << k << " does not live on the stage " << k
          << " space";
      throw InvalidInput(msg.str());
    }
  }
  for (int k = 0; k + 1 < system.depth(); ++k) {
    const ProbabilityMeasure mapped =
        system.connecting_map(k).apply(thread[static_cast<std::size_t>(k + 1)]);
    const double diff = mapped.max_weight_diff(thread[static_cast<std::size_t>(k)]);
    if (diff > kThreadTol) {
      std::ostringstream msg;
      msg << which << " thread is incompatible at stage " << k << ": mapping the stage "
          << (k + 1) << " measure down differs from the stage " << k << " entry by "
          << diff;
      throw InvalidInput(msg.str());
    }
  }
}

}  // namespace

AffineStageMap::AffineStageMap(SpacePtr source, SpacePtr target,
                               std::vector<ProbabilityMeasure> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (!source_ || !target_) throw InvalidInput("stage map needs source and target spaces");
  if (images_.size() != static_cast<std::size_t>(source_->size())) {
    std::ostringstream msg;
    msg << "stage map has " << images_.size() << " image measures for a source of "
        << source_->size() << " points";
    throw InvalidInput(msg.str());
  }
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (!images_[i].space()->same_metric_as(*target_)) {
      std::ostringstream msg;
      msg << "image measure of point " << i << " does not live on the target space";
      throw InvalidInput(msg.str());
    }
  }
}

AffineStageMap AffineStageMap::identity(const SpacePtr& space) {
  if (!space) throw InvalidInput("stage map needs source and target spaces");
  std::vector<ProbabilityMeasure> images;
  images.reserve(static_cast<std::size_t>(space->size()));
  for (int i = 0; i < space->size(); ++i) images.push_back(dirac(space, i));
  return AffineStageMap(space, space, std::move(images));
}

ProbabilityMeasure AffineStageMap::apply(const ProbabilityMeasure& mu) const {
  if (!mu.space()->same_metric_as(*source_)) {
    throw InvalidInput("measure does not live on the stage map's source space");
  }
  std::vector<double> w(static_cast<std::size_t>(target_->size()), 0.0);
  for (int i = 0; i < source_->size(); ++i) {
    const double c = mu.weight(i);
    if (c == 0.0) continue;
    const auto& iw = images_[static_cast<std::size_t>(i)].weights();
    for (std::size_t t = 0; t < w.size(); ++t) w[t] += c * iw[t];
  }
  return ProbabilityMeasure(target_, std::move(w));
}

AffineStageMap compose(const AffineStageMap& outer, const AffineStageMap& inner) {
  if (!inner.target()->same_metric_as(*outer.source())) {
    throw InvalidInput("cannot compose: inner map's target differs from outer map's source");
  }
  std::vector<ProbabilityMeasure> images;
  images.reserve(static_cast<std::size_t>(inner.source()->size()));
  for (int i = 0; i < inner.source()->size(); ++i) {
    images.push_back(outer.apply(inner.image_of(i)));
  }
  return AffineStageMap(inner.source(), outer.target(), std::move(images));
}

ExpansionReport check_nonexpansive(const AffineStageMap& map,
                                   const StageDistance& source_metric,
                                   const StageDistance& target_metric,
                                   int samples, std::uint64_t seed) {
  if (samples < 0) throw InvalidInput("sample count must be nonnegative");
  const SpacePtr& source = map.source();
  const int n = source->size();
  ExpansionReport report;

  const auto consider = [&](const ProbabilityMeasure& a, const ProbabilityMeasure& b) {
    const double ds = evaluate_distance(source_metric, a, b);
    if (ds <= kDegeneratePairCutoff) return;
    const double dt = evaluate_distance(target_metric, map.apply(a), map.apply(b));
    const double ratio = dt / ds;
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.worst_a = a.weights();
      report.worst_b = b.weights();
      report.worst_source_distance = ds;
      report.worst_target_distance = dt;
    }
  };

  const std::int64_t dirac_pairs =
      static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (dirac_pairs <= kMaxExhaustiveDiracPairs) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) consider(dirac(source, i), dirac(source, j));
    }
  } else {
    Rng pair_rng(sub_seed(seed, 0));
    for (std::int64_t t = 0; t < kMaxExhaustiveDiracPairs; ++t) {
      const int i = static_cast<int>(pair_rng.below(static_cast<std::uint64_t>(n)));
      int j = static_cast<int>(pair_rng.below(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;
      consider(dirac(source, i), dirac(source, j));
    }
  }

  Rng mix_rng(sub_seed(seed, 1));
  for (int s = 0; s < samples; ++s) {
    const ProbabilityMeasure a = random_full_support_measure(source, mix_rng);
    const ProbabilityMeasure b = random_full_support_measure(source, mix_rng);
    consider(a, b);
  }

  report.pass = report.max_ratio <= 1.0 + kNonexpansiveTol;
  return report;
}

InductiveSystem::InductiveSystem(std::vector<Stage> stages,
                                 std::vector<AffineStageMap> maps)
    : stages_(std::move(stages)), maps_(std::move(maps)) {
  if (stages_.empty()) throw InvalidInput("inductive system needs at least one stage");
  if (maps_.size() + 1 != stages_.size()) {
    std::ostringstream msg;
    msg << "inductive system with " << stages_.size() << " stages needs "
        << (stages_.size() - 1) << " connecting maps, got " << maps_.size();
    throw InvalidInput(msg.str());
  }
  for (std::size_t k = 0; k < stages_.size(); ++k) {
    if (!stages_[k].space) {
      std::ostringstream msg;
      msg << "stage " << k << " has no space";
      throw InvalidInput(msg.str());
    }
    const double scale = stages_[k].scale;
    if (!(scale > 0.0) || !std::isfinite(scale)) {
      std::ostringstream msg;
      msg << "stage " << k << " has scale " << scale << ", expected a positive finite value";
      throw InvalidInput(msg.str());
    }
  }
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    if (!maps_[k].source()->same_metric_as(*stages_[k + 1].space)) {
      std::ostringstream msg;
      msg << "connecting map " << k << " does not accept measures on the stage " << (k + 1)
          << " space";
      throw InvalidInput(msg.str());
    }
    if (!maps_[k].target()->same_metric_as(*stages_[k].space)) {
      std::ostringstream msg;
      msg << "connecting map " << k << " does not land in the stage " << k << " space";
      throw InvalidInput(msg.str());
    }
  }
  for (std::size_t k = 0; k < maps_.size(); ++k) {
    const std::uint64_t seed =
        sub_seed(stages_[k].space->digest() ^ stages_[k + 1].space->digest(), k);
    const ExpansionReport report = check_nonexpansive(
        maps_[k], stages_[k + 1].metric, stages_[k].metric, kConstructionSamples, seed);
    // The declared stage metrics carry the configured scales, so the
    // expansion ratio is compared after rescaling.
    const double scaled_ratio = report.max_ratio * stages_[k].scale / stages_[k + 1].scale;
    if (scaled_ratio > 1.0 + kNonexpansiveTol) {
      std::ostringstream msg;
      msg << "connecting map from stage " << (k + 1) << " to stage " << k
          << " expands the stage distance: worst sampled ratio " << scaled_ratio
          << " (source distance " << report.worst_source_distance << ", target distance "
          << report.worst_target_distance << ")";
      throw CheckFailure(msg.str());
    }
  }
}

double InductiveSystem::stage_distance(int k, const ProbabilityMeasure& mu,
                                       const ProbabilityMeasure& nu) const {
  if (k < 0 || k >= depth()) {
    std::ostringstream msg;
    msg << "stage index " << k << " out of range [0," << depth() << ")";
    throw InvalidInput(msg.str());
  }
  const Stage& st = stages_[static_cast<std::size_t>(k)];
  if (!mu.space()->same_metric_as(*st.space) || !nu.space()->same_metric_as(*st.space)) {
    std::ostringstream msg;
    msg << "measures do not live on the stage " << k << " space";
    throw InvalidInput(msg.str());
  }
  return st.scale * evaluate_distance(st.metric, mu, nu);
}

double limit_metric(const InductiveSystem& system, const MeasureThread& sigma,
                    const MeasureThread& tau) {
  validate_thread(system, sigma, "first");
  validate_thread(system, tau, "second");
  double value = 0.0;
  for (int k = 0; k < system.depth(); ++k) {
    value = std::max(value, system.stage_distance(k, sigma[static_cast<std::size_t>(k)],
                                                  tau[static_cast<std::size_t>(k)]));
  }
  return value;
}

ProWinfResult pro_winf(const InductiveSystem& system, const MeasureThread& sigma,
                       const MeasureThread& tau) {
  validate_thread(system, sigma, "first");
  validate_thread(system, tau, "second");
  ProWinfResult result;
  const int depth = system.depth();
  result.stage_values.resize(static_cast<std::size_t>(depth));
  const StageDistance winf{DistanceKind::kWassersteinInf, 1.0};
  for (int k = 0; k < depth; ++k) {
    result.stage_values[static_cast<std::size_t>(k)] =
        system.stage(k).scale * evaluate_distance(winf, sigma[static_cast<std::size_t>(k)],
                                                  tau[static_cast<std::size_t>(k)]);
  }
  const int tail = (depth + 1) / 2;
  for (int k = depth - tail; k < depth; ++k) {
    result.value = std::max(result.value, result.stage_values[static_cast<std::size_t>(k)]);
  }
  return result;
}

AffineStageMap simplex_embed(const SpacePtr& equidistant, const SpacePtr& grid) {
  if (!equidistant || !grid) throw InvalidInput("simplex embedding needs both spaces");
  require_equidistant(*equidistant, "source");
  const int dim = equidistant->size();
  require_barycentric(*grid, dim, "target");
  const std::vector<int> vertices = vertex_indices(*grid, dim, "target");
  std::vector<ProbabilityMeasure> images;
  images.reserve(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) {
    images.push_back(dirac(grid, vertices[static_cast<std::size_t>(j)]));
  }
  return AffineStageMap(equidistant, grid, std::move(images));
}

AffineStageMap skeleton_project(const SpacePtr& grid, const SpacePtr& equidistant) {
  if (!equidistant || !grid) throw InvalidInput("skeleton projection needs both spaces");
  require_equidistant(*equidistant, "target");
  const int dim = equidistant->size();
  require_barycentric(*grid, dim, "source");
  std::vector<ProbabilityMeasure> images;
  images.reserve(grid->coords().size());
  for (const auto& c : grid->coords()) {
    images.push_back(ProbabilityMeasure(equidistant, c));
  }
  return AffineStageMap(grid, equidistant, std::move(images));
}

}  // namespace mmd

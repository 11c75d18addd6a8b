// inductive.hpp — affine maps between measure simplices, inductive systems
// of metric-measure stages, and the limit metrics living on them.
//
// An AffineStageMap is determined by the images of the source points: the
// point i maps to a probability measure on the target space, and measures map
// by linearity (a column-stochastic matrix acting on weight vectors).  Chains
// of such maps form an InductiveSystem; compatible per-stage measure threads
// get a limit distance (sup over stages) and an order-infinity tail distance
// (max over the tail half of the truncation, a limsup surrogate).
//
// The simplex/grid intertwining pair: with X the equidistant space on k+1
// points at mutual distance 2 (so its order-1 distance is exactly the l1
// distance of weight vectors) and G a barycentric grid from gen_simplicial,
//
//   * simplex_embed(X, G)     sends the weight vector a to the vertex-
//                             supported measure sum_i a_i * delta_{e_i};
//                             isometric because grid vertices are mutually
//                             at distance 2.
//   * skeleton_project(G, X)  reads barycentric coordinates off grid points;
//                             on measures this takes barycentric expectations.
//                             Nonexpansive: signed coordinate sums are
//                             1-Lipschitz for both grid metrics.
//
// Their composite (project after embed) is the identity on the weight
// simplex of X — exactly, including off the rational grid.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmdist/measure.hpp"
#include "mmdist/metric_space.hpp"
#include "mmdist/transport.hpp"

namespace mmd {

// Affine (measure-linear) map between the probability simplices of two
// finite metric spaces.
class AffineStageMap {
 public:
  // images[i] = image measure of source point i; all images must share the
  // target space and there must be one per source point.
  AffineStageMap(SpacePtr source, SpacePtr target,
                 std::vector<ProbabilityMeasure> images);

  static AffineStageMap identity(const SpacePtr& space);

  const SpacePtr& source() const { return source_; }
  const SpacePtr& target() const { return target_; }
  const ProbabilityMeasure& image_of(int i) const {
    return images_[static_cast<std::size_t>(i)];
  }

  // Linear action: weights w map to sum_i w_i * images[i].  Throws
  // InvalidInput when mu does not live on the source space.
  ProbabilityMeasure apply(const ProbabilityMeasure& mu) const;

 private:
  SpacePtr source_;
  SpacePtr target_;
  std::vector<ProbabilityMeasure> images_;
};

// outer o inner: requires inner's target metric to equal outer's source
// metric.  Throws InvalidInput otherwise.
AffineStageMap compose(const AffineStageMap& outer, const AffineStageMap& inner);

// Tolerance for the nonexpansiveness certificates below and for the
// connecting-map check at system construction.
inline constexpr double kNonexpansiveTol = 1e-7;

struct ExpansionReport {
  bool pass = true;
  // Largest sampled ratio (target distance / source distance).
  double max_ratio = 0.0;
  // Weight vectors of the worst sampled pair, on the source space.
  std::vector<double> worst_a, worst_b;
  double worst_source_distance = 0.0;
  double worst_target_distance = 0.0;
};

// Samples measure pairs on the source (every dirac pair — subsampled above
// 400 pairs — plus `samples` random mixture pairs from the seeded generator),
// evaluates the declared distances on both sides, and reports the largest
// expansion ratio.  pass iff max_ratio <= 1 + kNonexpansiveTol.
ExpansionReport check_nonexpansive(const AffineStageMap& map,
                                   const StageDistance& source_metric,
                                   const StageDistance& target_metric,
                                   int samples, std::uint64_t seed);

// One stage of an inductive system: a space, the measure distance declared on
// it, and a configured remetrization factor multiplying that distance
// (default 1; stands in for externally supplied stage-wise metric
// adjustments).
struct Stage {
  SpacePtr space;
  StageDistance metric;
  double scale = 1.0;
};

// A finite truncation of an inverse system of measure simplices:
// stages 0..d-1 and connecting maps, where maps[k] sends measures on stage
// k+1's space to measures on stage k's space.
class InductiveSystem {
 public:
  // Validates shape (one map per adjacent stage pair, matching spaces,
  // positive finite scales) and checks every connecting map nonexpansive for
  // the declared stage distances on sampled pairs; throws CheckFailure naming
  // the first offending stage when a map expands by more than
  // kNonexpansiveTol.
  InductiveSystem(std::vector<Stage> stages, std::vector<AffineStageMap> maps);

  int depth() const { return static_cast<int>(stages_.size()); }
  const Stage& stage(int k) const { return stages_[static_cast<std::size_t>(k)]; }
  // The map from stage k+1 measures to stage k measures, 0 <= k < depth()-1.
  const AffineStageMap& connecting_map(int k) const {
    return maps_[static_cast<std::size_t>(k)];
  }

  // Scaled distance of the declared stage metric.
  double stage_distance(int k, const ProbabilityMeasure& mu,
                        const ProbabilityMeasure& nu) const;

 private:
  std::vector<Stage> stages_;
  std::vector<AffineStageMap> maps_;
};

// One measure per stage, index k on stage k's space.
using MeasureThread = std::vector<ProbabilityMeasure>;

// Largest acceptable sup-norm gap between map_k(thread[k+1]) and thread[k].
inline constexpr double kThreadTol = 1e-7;

// Sup over stages of the (scaled) stage distance between two compatible
// threads.  Throws InvalidInput when a thread has the wrong length, lives on
// the wrong spaces, or fails compatibility — naming the first failing stage.
double limit_metric(const InductiveSystem& system, const MeasureThread& sigma,
                    const MeasureThread& tau);

struct ProWinfResult {
  // Max over the last ceil(depth/2) stages: the finite-truncation stand-in
  // for the limsup of the stage values.
  double value = 0.0;
  // Order-infinity distance at every stage, index-aligned with the system.
  std::vector<double> stage_values;
};

// Stage-wise order-infinity distances of two compatible threads (the
// declared stage metrics are ignored; stage scales still apply).
// Thread validation as in limit_metric.
ProWinfResult pro_winf(const InductiveSystem& system, const MeasureThread& sigma,
                       const MeasureThread& tau);

// The embedding of the weight simplex of an equidistant space into the
// measure simplex of a barycentric grid: point j of `equidistant` maps to the
// point mass at the grid vertex with barycentric coordinate e_j.  Requires
// `equidistant` to have equal off-diagonal distances, `grid` to carry
// barycentric coordinates of matching dimension containing every vertex.
AffineStageMap simplex_embed(const SpacePtr& equidistant, const SpacePtr& grid);

// The projection reading barycentric coordinates off grid points: grid point
// i maps to the measure with weights coords(i) on `equidistant`.  Same
// requirements as simplex_embed.
AffineStageMap skeleton_project(const SpacePtr& grid, const SpacePtr& equidistant);

}  // namespace mmd

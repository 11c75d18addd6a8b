// measure.hpp — probability measures on finite metric spaces and the affine
// operations on them: point masses, mixtures, pushforwards, and empirical
// measures.
//
// Weights are doubles, renormalized to total mass 1 on construction.  Tiny
// negative weights (>= -1e-14) from mixture rounding are clamped to zero;
// anything more negative is rejected as invalid input.
#pragma once

#include <vector>

#include "mmdist/metric_space.hpp"

namespace mmd {

class ProbabilityMeasure {
 public:
  // Throws InvalidInput when the weight count does not match the space, a
  // weight is below -1e-14, or the total mass is not positive.
  ProbabilityMeasure(SpacePtr space, std::vector<double> weights);

  const SpacePtr& space() const { return space_; }
  const std::vector<double>& weights() const { return weights_; }
  double weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(weights_.size()); }

  // Indices with strictly positive weight, ascending.
  std::vector<int> support() const;

  // Sup-norm distance between weight vectors (requires equal sizes).
  double max_weight_diff(const ProbabilityMeasure& other) const;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

// Point mass at point i.
ProbabilityMeasure dirac(SpacePtr space, int i);

// Convex combination sum(coeffs[t] * measures[t]).  All measures must live on
// the same metric (same_metric_as), coefficients in [0,1] summing to 1 within
// 1e-12.
ProbabilityMeasure mixture(const std::vector<double>& coeffs,
                           const std::vector<ProbabilityMeasure>& measures);

// Image measure under the point map i -> point_map[i] into `target`:
// the weight of target point j is the sum of source weights mapped onto j
// (accumulated in ascending source order).
ProbabilityMeasure pushforward(const std::vector<int>& point_map, SpacePtr target,
                               const ProbabilityMeasure& mu);

// Empirical measure of the listed sample points: weight 1/n per occurrence,
// or multiplicity-weighted when `multiplicities` is nonempty (must then match
// indices in length, entries >= 0 with positive total).
ProbabilityMeasure empirical(SpacePtr space, const std::vector<int>& indices,
                             const std::vector<double>& multiplicities = {});

}  // namespace mmd

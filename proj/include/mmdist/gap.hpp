// gap.hpp — certified approximate-isometry estimates between the measure
// simplices of two finite metric spaces, and an exact Gromov–Hausdorff
// distance for tiny spaces.
//
// A certificate consists of an affine forward/backward map pair together
// with sampled defects: how far the maps are from preserving the chosen
// measure distances (isometry defect) and how far their round trips are from
// the identity (invertibility defect).  Defects are measured on every dirac
// pair plus seeded random mixtures, so the bound is a statistical
// certificate over the sampled set, not a proof over the whole simplex.
//
// Certificates are symmetric: both map directions contribute to both
// defects, and the per-side sample streams are seeded from the space
// digests, so exchanging the two spaces reproduces the same epsilon bound.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mmdist/inductive.hpp"
#include "mmdist/metric_space.hpp"
#include "mmdist/transport.hpp"

namespace mmd {

struct GapCertificate {
  // Largest defect observed; equals max(isometry_defect,
  // invertibility_defect).
  double epsilon_bound;
  AffineStageMap forward;   // f : prob(M1) -> prob(M2)
  AffineStageMap backward;  // g : prob(M2) -> prob(M1)
  // Largest sampled |D(map a, map b) - D(a, b)| over both maps.
  double isometry_defect;
  // Largest sampled distance of a round trip (f after g on the second
  // simplex, g after f on the first) from its starting measure.
  double invertibility_defect;
};

// Point correspondence: pairs (i, j) with i in the first space and j in the
// second.  A valid correspondence covers every point of both spaces.
using Correspondence = std::vector<std::pair<int, int>>;

// The correspondence sending each point of `space` to its nearest point of
// the sub-point-set `net` (lowest net position on ties): pairs
// (i, position-in-net).  This is the canonical input for certifying a space
// against one of its nets.
Correspondence net_correspondence(const FiniteMetricSpace& space,
                                  const std::vector<int>& net);

// Builds forward/backward point-to-point maps from the correspondence (each
// point goes to its lowest-index partner) and certifies their defects for
// the chosen distances on `samples` random mixture pairs per side plus all
// dirac pairs.  With an empty correspondence a deterministic greedy
// distortion-minimizing alignment is used (a heuristic: the certificate is
// only as good as the alignment it checks).  `eps` is the caller's target
// certificate scale; it is validated and reported alongside the observed
// bound by the command-line layer but does not steer the construction.
GapCertificate gamma_q_upper(const SpacePtr& m1, const StageDistance& d1,
                             const SpacePtr& m2, const StageDistance& d2, double eps,
                             int samples, std::uint64_t seed,
                             const Correspondence& correspondence = {});

struct MapCheckResult {
  bool pass = false;
  double isometry_defect = 0.0;      // of the forward map, on first-space pairs
  double invertibility_defect = 0.0; // of forward-after-backward, on the second simplex
};

// Directional check of a user-supplied map pair: passes iff the forward
// map's isometry defect and the forward-after-backward round-trip defect
// both stay strictly below eps on all sampled inputs.
MapCheckResult check_maps(const AffineStageMap& forward, const AffineStageMap& backward,
                          const StageDistance& d1, const StageDistance& d2, double eps,
                          int samples, std::uint64_t seed);

// Exhaustive-search budget for the exact Gromov–Hausdorff distance.
inline constexpr int kMaxGromovHausdorffPoints = 6;

// Exact Gromov–Hausdorff distance between two tiny spaces: half the minimum,
// over all correspondences (nonempty relations with full projections), of
// the maximum metric distortion.  The search runs over partner-selection
// pairs, which realize the same minimum, with branch-and-bound pruning.
// Throws when either size exceeds max_size (which itself may not exceed
// kMaxGromovHausdorffPoints).
double gromov_hausdorff_small(const FiniteMetricSpace& m1, const FiniteMetricSpace& m2,
                              int max_size = kMaxGromovHausdorffPoints);

}  // namespace mmd

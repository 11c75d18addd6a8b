// generators.hpp — the example geometries every other module computes on.
//
// Constructions: equidistant point sets, Sierpinski gasket/carpet skeleton
// graphs, barycentric grids on simplicial spheres and balls, uniformly
// sampled round spheres, greedy epsilon-nets, and a box-counting dimension
// estimator for graphs with vertex coordinates.
//
// All constructions are deterministic: the same arguments (and, where one is
// taken, the same seed) reproduce the output bit for bit.
#pragma once

#include <cstdint>
#include <vector>

#include "mmdist/length_graph.hpp"
#include "mmdist/metric_space.hpp"

namespace mmd {

// n points with all off-diagonal distances equal to 2r, so the radius
// (half the diameter) is exactly r for n >= 2.  Throws InvalidInput for
// n < 1 or non-positive r, ResourceError above kMaxIntrinsicPoints.
FiniteMetricSpace gen_equidistant(int n, double r);

enum class FractalKind {
  kGasket,  // Sierpinski triangle
  kCarpet,  // Sierpinski carpet
};

// Largest supported subdivision levels.  Chosen so the vertex count stays
// below 10^6 (gasket level 10 has 88'575 vertices, carpet level 6 has
// ~450'000).
inline constexpr int kMaxGasketLevel = 10;
inline constexpr int kMaxCarpetLevel = 6;

// The 1-skeleton of the level-`level` Sierpinski construction with unit outer
// side.  Vertices carry plane coordinates; every edge has its Euclidean
// segment length (2^-level for the gasket, 3^-level for the carpet).
//
// Gasket level k consists of 3^k upward triangles of side 2^-k; they meet
// only at shared corner vertices, so the graph has exactly 3^(k+1) edges and
// (3^(k+1) + 3)/2 vertices.  Carpet level k keeps the 8^k sub-squares of side
// 3^-k whose base-3 cell addresses avoid the middle cell at every digit;
// shared square sides are deduplicated.
//
// Throws InvalidInput for a negative level and ResourceError above the level
// limits.
LengthGraph gen_sierpinski(FractalKind kind, int level);

enum class SimplicialKind {
  kSphere,  // boundary (k-1)-skeleton of the k-simplex
  kBall,    // full k-simplex
};

// Point budget for simplicial grids; finer meshes raise ResourceError.
inline constexpr std::int64_t kMaxSimplicialPoints = 100000;

// Barycentric grid on the standard k-simplex with denominator `mesh`:
// the points are the rational barycentric coordinates (a_0,...,a_k)/mesh
// with nonnegative integer a_i summing to mesh.
//
//   * kBall:   every grid point; dist = l1 distance of barycentric
//              coordinates (so vertex-to-vertex distance is 2).  Distances
//              are rounded up onto the 2^-48 lattice, which keeps the metric
//              axioms exact in double arithmetic and leaves dyadic meshes and
//              integer-valued distances untouched.
//   * kSphere: only points on the boundary (some a_i = 0); dist = shortest
//              path in the grid graph whose edges join single-unit transfers
//              inside a common facet, each of l1 length 2/mesh.  This is the
//              discrete intrinsic metric of the boundary; vertex-to-vertex
//              distance is again 2 because simplex edges are shortest paths.
//
// Points carry their barycentric coordinates in coords().  Throws
// InvalidInput for k < 1, mesh < 1, or the disconnected 0-sphere
// (kSphere with k = 1); ResourceError when the grid exceeds
// kMaxSimplicialPoints or the dense-matrix budget kMaxIntrinsicPoints.
FiniteMetricSpace gen_simplicial(SimplicialKind kind, int k, int mesh);

// Geodesic (great-circle) distance between two unit vectors: the inner
// product is clamped to [-1, 1] before arccos, so rounding can never produce
// NaN and exactly antipodal vectors give pi.  Throws InvalidInput on
// dimension mismatch.
double arc_distance(const std::vector<double>& x, const std::vector<double>& y);

// n points drawn uniformly on the unit sphere S^(k-1) in R^k (normalized
// standard Gaussian vectors from the seeded generator), with geodesic
// distances.  A draw that coincides with an already accepted point (geodesic
// distance exactly 0) is rejected and redrawn, up to 100 attempts per point;
// exhausting the budget raises CheckFailure.  Coordinates are stored.
// Throws InvalidInput for k < 2 or n < 1, ResourceError above
// kMaxIntrinsicPoints.
FiniteMetricSpace gen_sphere_sample(int k, int n, std::uint64_t seed);

// Greedy farthest-point net: starts at index 0 and repeatedly adds the point
// farthest from the current net (lowest index on ties) until every point is
// within eps of the net.  The result, in insertion order, is therefore both
// an eps-covering and eps-separated.  Throws InvalidInput for eps <= 0.
std::vector<int> eps_net(const FiniteMetricSpace& space, double eps);

struct BoxCountResult {
  // Least-squares slope of log(count) against log(1/scale).
  double dimension = 0.0;
  // Number of occupied boxes at each requested scale, in input order.
  std::vector<std::int64_t> counts;
};

// Box-counting dimension estimate for a graph with vertex coordinates: at
// each scale s the vertices are binned into an axis-aligned grid of side s
// anchored at the coordinate-wise minimum, and the slope of log(count) vs
// log(1/s) is fitted by least squares.  Scales must be positive, strictly
// decreasing, and at least two.  Throws InvalidInput when coordinates are
// missing or the scale list is malformed.
BoxCountResult box_counting_dimension(const LengthGraph& graph,
                                      const std::vector<double>& scales);

}  // namespace mmd

// metric_space.hpp — finite metric spaces: the substrate every distance
// computation in this library runs on.
//
// A FiniteMetricSpace is n points with a full symmetric distance matrix.
// Construction performs shape checks only; metric axioms are verified by the
// explicit validate_metric() call so that callers can distinguish "malformed
// data" from "data that fails to be a metric".
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace mmd {

class FiniteMetricSpace {
 public:
  // dist is row-major n*n.  labels/coords are optional: pass empty vectors,
  // or vectors with exactly n entries.
  FiniteMetricSpace(int n, std::vector<double> dist,
                    std::vector<std::string> labels = {},
                    std::vector<std::vector<double>> coords = {});

  int size() const { return n_; }
  // Throws InvalidInput when i is not a point index of this space.
  void check_point(int i) const;
  double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
  const double* row(int i) const { return dist_.data() + static_cast<std::size_t>(i) * n_; }
  const std::vector<double>& dist_matrix() const { return dist_; }

  // Largest pairwise distance (0 for a single point).
  double diameter() const { return diameter_; }
  // Half the diameter; for n >= 2 equidistant points at mutual distance 2r
  // this is exactly r.
  double radius() const { return diameter_ / 2.0; }
  // Smallest off-diagonal entry (0 for a single point).
  double min_positive_distance() const { return min_offdiag_; }

  bool has_labels() const { return !labels_.empty(); }
  bool has_coords() const { return !coords_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::vector<double>>& coords() const { return coords_; }

  // Content hash (FNV-1a over the size and distance bytes).  Used to derive
  // space-dependent, argument-order-independent random streams.
  std::uint64_t digest() const { return digest_; }

  // True when the two spaces are usable interchangeably: same object, or same
  // size and bitwise-equal distance matrix.
  bool same_metric_as(const FiniteMetricSpace& other) const;

 private:
  int n_;
  std::vector<double> dist_;
  std::vector<std::string> labels_;
  std::vector<std::vector<double>> coords_;
  double diameter_ = 0.0;
  double min_offdiag_ = 0.0;
  std::uint64_t digest_ = 0;
};

using SpacePtr = std::shared_ptr<const FiniteMetricSpace>;

// Which metric axiom a validation run violated first.
enum class MetricAxiom {
  kNone,          // all axioms hold
  kZeroDiagonal,  // dist[i][i] != 0
  kSymmetry,      // dist[i][j] != dist[j][i]
  kPositivity,    // dist[i][j] <= 0 for i != j
  kTriangle,      // dist[i][k] > dist[i][j] + dist[j][k] + tol
};

struct ValidationReport {
  bool pass = true;
  MetricAxiom axiom = MetricAxiom::kNone;
  // Indices of the first violation; unused entries are -1.
  int i = -1, j = -1, k = -1;
  // Human-readable one-line summary.
  std::string message = "ok";
};

// Checks all metric axioms within the absolute tolerance `tol` and reports
// the first violation.  Throws InvalidInput when the matrix contains NaN or
// infinite entries (malformed data rather than a failed metric axiom).
ValidationReport validate_metric(const FiniteMetricSpace& space, double tol);

// The restriction of `space` to the given points, in the given order.
// Labels/coords are restricted along.  Throws InvalidInput on bad indices.
FiniteMetricSpace subspace(const FiniteMetricSpace& space,
                           const std::vector<int>& points);

}  // namespace mmd

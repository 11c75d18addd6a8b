// metric_space.cpp — FiniteMetricSpace construction and validation.

#include "mmdist/metric_space.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "mmdist/errors.hpp"
#include "mmdist/simd.hpp"

namespace mmd {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t bytes, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(int n, std::vector<double> dist,
                                     std::vector<std::string> labels,
                                     std::vector<std::vector<double>> coords)
    : n_(n), dist_(std::move(dist)), labels_(std::move(labels)), coords_(std::move(coords)) {
  if (n_ <= 0) throw InvalidInput("metric space needs at least one point");
  if (dist_.size() != static_cast<std::size_t>(n_) * n_) {
    std::ostringstream msg;
    msg << "distance matrix has " << dist_.size() << " entries, expected " << n_ << "x" << n_;
    throw InvalidInput(msg.str());
  }
  if (!labels_.empty() && labels_.size() != static_cast<std::size_t>(n_)) {
    throw InvalidInput("label list length does not match point count");
  }
  if (!coords_.empty()) {
    if (coords_.size() != static_cast<std::size_t>(n_)) {
      throw InvalidInput("coordinate list length does not match point count");
    }
    for (const auto& c : coords_) {
      if (c.size() != coords_.front().size()) {
        throw InvalidInput("coordinate vectors have inconsistent dimensions");
      }
    }
  }
  diameter_ = 0.0;
  min_offdiag_ = 0.0;
  bool first_offdiag = true;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const double d = dist_[static_cast<std::size_t>(i) * n_ + j];
      if (d > diameter_) diameter_ = d;
      if (first_offdiag || d < min_offdiag_) {
        min_offdiag_ = d;
        first_offdiag = false;
      }
    }
  }
  std::uint64_t h = fnv1a(&n_, sizeof(n_), 1469598103934665603ull);
  digest_ = fnv1a(dist_.data(), dist_.size() * sizeof(double), h);
}

void FiniteMetricSpace::check_point(int i) const {
  if (i < 0 || i >= n_) {
    throw InvalidInput("point index " + std::to_string(i) + " outside space of size " +
                       std::to_string(n_));
  }
}

bool FiniteMetricSpace::same_metric_as(const FiniteMetricSpace& other) const {
  if (this == &other) return true;
  if (n_ != other.n_) return false;
  if (digest_ != other.digest_) return false;
  return std::memcmp(dist_.data(), other.dist_.data(), dist_.size() * sizeof(double)) == 0;
}

ValidationReport validate_metric(const FiniteMetricSpace& space, double tol) {
  if (tol < 0) throw InvalidInput("validation tolerance must be nonnegative");
  const int n = space.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(space.dist(i, j))) {
        std::ostringstream msg;
        msg << "distance matrix entry (" << i << "," << j << ") is not finite";
        throw InvalidInput(msg.str());
      }
    }
  }
  ValidationReport report;
  auto fail = [&report](MetricAxiom axiom, int i, int j, int k, const std::string& msg) {
    report.pass = false;
    report.axiom = axiom;
    report.i = i;
    report.j = j;
    report.k = k;
    report.message = msg;
    return report;
  };
  for (int i = 0; i < n; ++i) {
    if (space.dist(i, i) != 0.0) {
      std::ostringstream msg;
      msg << "nonzero diagonal at (" << i << "," << i << "): " << space.dist(i, i);
      return fail(MetricAxiom::kZeroDiagonal, i, i, -1, msg.str());
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (space.dist(i, j) != space.dist(j, i)) {
        std::ostringstream msg;
        msg << "asymmetry at (" << i << "," << j << "): " << space.dist(i, j)
            << " vs " << space.dist(j, i);
        return fail(MetricAxiom::kSymmetry, i, j, -1, msg.str());
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (space.dist(i, j) <= 0.0) {
        std::ostringstream msg;
        msg << "non-positive distance " << space.dist(i, j) << " between distinct points ("
            << i << "," << j << ")";
        return fail(MetricAxiom::kPositivity, i, j, -1, msg.str());
      }
    }
  }
  // Triangle inequality: for each pair (i, j), scan all k at once over the
  // two matrix rows.
  const auto& kernels = simd::active_kernels();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const std::ptrdiff_t k = kernels.triangle_scan(
          space.row(i), space.row(j), space.dist(i, j), tol, static_cast<std::size_t>(n));
      if (k >= 0) {
        std::ostringstream msg;
        msg << "triangle violation: dist(" << i << "," << k << ") = "
            << space.dist(i, static_cast<int>(k)) << " > dist(" << i << "," << j << ") + dist("
            << j << "," << k << ") = "
            << space.dist(i, j) + space.dist(j, static_cast<int>(k)) << " (+tol)";
        return fail(MetricAxiom::kTriangle, i, j, static_cast<int>(k), msg.str());
      }
    }
  }
  return report;
}

FiniteMetricSpace subspace(const FiniteMetricSpace& space, const std::vector<int>& points) {
  if (points.empty()) throw InvalidInput("subspace needs at least one point");
  const int m = static_cast<int>(points.size());
  for (int idx : points) {
    if (idx < 0 || idx >= space.size()) {
      std::ostringstream msg;
      msg << "subspace index " << idx << " out of range [0," << space.size() << ")";
      throw InvalidInput(msg.str());
    }
  }
  std::vector<double> dist(static_cast<std::size_t>(m) * m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      dist[static_cast<std::size_t>(a) * m + b] = space.dist(points[a], points[b]);
    }
  }
  std::vector<std::string> labels;
  if (space.has_labels()) {
    labels.reserve(points.size());
    for (int idx : points) labels.push_back(space.labels()[idx]);
  }
  std::vector<std::vector<double>> coords;
  if (space.has_coords()) {
    coords.reserve(points.size());
    for (int idx : points) coords.push_back(space.coords()[idx]);
  }
  return FiniteMetricSpace(m, std::move(dist), std::move(labels), std::move(coords));
}

}  // namespace mmd

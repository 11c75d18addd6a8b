// simd_scalar.cpp — portable reference kernels and the dispatch logic.

#include "mmdist/simd.hpp"

#include <cstdlib>
#include <cstring>

namespace mmd::simd {

namespace {

double scalar_sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double scalar_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double scalar_l1_dist(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d < 0.0 ? -d : d;
  }
  return acc;
}

double scalar_max_abs_diff(const double* a, const double* b, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    const double ad = d < 0.0 ? -d : d;
    if (ad > best) best = ad;
  }
  return best;
}

std::ptrdiff_t scalar_triangle_scan(const double* di, const double* dj,
                                    double dij, double tol, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (di[k] > dij + dj[k] + tol) return static_cast<std::ptrdiff_t>(k);
  }
  return -1;
}

constexpr KernelTable kScalarTable = {
    "scalar",         scalar_sum,          scalar_dot,
    scalar_l1_dist,   scalar_max_abs_diff, scalar_triangle_scan,
};

const KernelTable& resolve_active() {
  const char* request = std::getenv("MMDIST_KERNELS");
  if (request != nullptr) {
    if (std::strcmp(request, "scalar") == 0) return kScalarTable;
    if (std::strcmp(request, "avx2") == 0 && avx2_kernels() != nullptr) {
      return *avx2_kernels();
    }
    // Unknown or unavailable request: fall through to the default choice.
  }
  if (const KernelTable* best = avx2_kernels()) return *best;
  return kScalarTable;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalarTable; }

const KernelTable& active_kernels() {
  static const KernelTable& table = resolve_active();
  return table;
}

}  // namespace mmd::simd

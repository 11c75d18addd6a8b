// simd.hpp — runtime-dispatched dense numeric kernels.
//
// The library's combinatorial solvers are scalar by nature, but a handful of
// dense inner loops dominate several paths: triangle-inequality scans over
// distance-matrix rows (O(n^3) validation), l1 distances between barycentric
// coordinate vectors, dot products for sampled spheres, and plain reductions
// for Monte Carlo statistics.  Those live here as a kernel table with a
// portable scalar reference implementation and an AVX2 variant compiled in a
// separate translation unit; the active table is chosen once at startup from
// CPU capabilities.
//
// Determinism: dispatch is stable on a given machine, so repeated runs use
// the same kernels and produce bit-identical results.  The scalar and AVX2
// variants may differ in the last bits of reductions (different accumulation
// order); the MMDIST_KERNELS environment variable ("scalar" or "avx2") forces
// a specific table when cross-machine reproducibility matters.  Both variants
// are equivalence-tested against each other.
#pragma once

#include <cstddef>

namespace mmd::simd {

struct KernelTable {
  const char* name;
  // Sum of a[0..n).
  double (*sum)(const double* a, std::size_t n);
  // Dot product of a and b.
  double (*dot)(const double* a, const double* b, std::size_t n);
  // Sum of |a[i] - b[i]| (l1 distance).
  double (*l1_dist)(const double* a, const double* b, std::size_t n);
  // Max of |a[i] - b[i]| (sup distance); 0 for n = 0.
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
  // First index k with di[k] > dij + dj[k] + tol, or -1 if none.  Used for
  // triangle-inequality scans: di and dj are distance-matrix rows and dij the
  // distance between their base points.  The comparison is evaluated exactly
  // as written, so scalar and vector variants agree bitwise.
  std::ptrdiff_t (*triangle_scan)(const double* di, const double* dj,
                                  double dij, double tol, std::size_t n);
};

// Portable reference implementation (always available).
const KernelTable& scalar_kernels();

// AVX2 implementation, or nullptr when unsupported by the build or the CPU.
const KernelTable* avx2_kernels();

// The table used by the library: resolved once per process.  Honors the
// MMDIST_KERNELS environment variable, otherwise picks the best available.
const KernelTable& active_kernels();

}  // namespace mmd::simd

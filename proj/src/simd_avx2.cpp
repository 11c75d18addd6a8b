// simd_avx2.cpp — AVX2 kernel variants.
//
// This translation unit is compiled with -mavx2 on x86-64 builds (see
// CMakeLists); everywhere else it degrades to a stub that reports the table
// as unavailable.  Callers must go through avx2_kernels(), which performs the
// runtime CPU check before exposing the table.

#include "mmdist/simd.hpp"

#if defined(__AVX2__)

#include <immintrin.h>

namespace mmd::simd {

namespace {

// Horizontal sum of a 4-lane double vector.  Fixed lane order keeps results
// reproducible run to run.
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

inline __m256d abs_pd(__m256d v) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFll));
  return _mm256_and_pd(v, mask);
}

double avx2_sum(const double* a, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += a[i];
  return total;
}

double avx2_dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, prod);
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += a[i] * b[i];
  return total;
}

double avx2_l1_dist(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, abs_pd(diff));
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d < 0.0 ? -d : d;
  }
  return total;
}

double avx2_max_abs_diff(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_max_pd(acc, abs_pd(diff));
  }
  // max is exactly associative, so lane order does not affect the result.
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  lo = _mm_max_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  double best = _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    const double ad = d < 0.0 ? -d : d;
    if (ad > best) best = ad;
  }
  return best;
}

std::ptrdiff_t avx2_triangle_scan(const double* di, const double* dj,
                                  double dij, double tol, std::size_t n) {
  const __m256d vdij = _mm256_set1_pd(dij);
  const __m256d vtol = _mm256_set1_pd(tol);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // Same association as the scalar code: (dij + dj[k]) + tol.
    const __m256d bound =
        _mm256_add_pd(_mm256_add_pd(vdij, _mm256_loadu_pd(dj + i)), vtol);
    const __m256d violated = _mm256_cmp_pd(_mm256_loadu_pd(di + i), bound, _CMP_GT_OQ);
    const int mask = _mm256_movemask_pd(violated);
    if (mask != 0) {
      // Resolve the first violating lane scalar-side for an exact index.
      for (std::size_t k = i; k < i + 4; ++k) {
        if (di[k] > dij + dj[k] + tol) return static_cast<std::ptrdiff_t>(k);
      }
    }
  }
  for (; i < n; ++i) {
    if (di[i] > dij + dj[i] + tol) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

constexpr KernelTable kAvx2Table = {
    "avx2",       avx2_sum,          avx2_dot,
    avx2_l1_dist, avx2_max_abs_diff, avx2_triangle_scan,
};

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable* table =
      __builtin_cpu_supports("avx2") ? &kAvx2Table : nullptr;
  return table;
}

}  // namespace mmd::simd

#else  // !defined(__AVX2__)

namespace mmd::simd {

const KernelTable* avx2_kernels() { return nullptr; }

}  // namespace mmd::simd

#endif

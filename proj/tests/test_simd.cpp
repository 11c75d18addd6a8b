// test_simd.cpp — kernel-table equivalence: every vector variant must agree
// with the scalar reference (bitwise for comparisons and max-reductions,
// within tight relative tolerance for sum-reductions, whose accumulation
// order differs).
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "mmdist/rng.hpp"
#include "mmdist/simd.hpp"

using namespace mmd;

namespace {

std::vector<double> random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

void check_tables_agree(const simd::KernelTable& a, const simd::KernelTable& b,
                        std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const auto x = random_vector(rng, n, -2.0, 3.0);
  const auto y = random_vector(rng, n, -1.0, 4.0);

  const double rel = 1e-12;
  CHECK(std::abs(a.sum(x.data(), n) - b.sum(x.data(), n)) <=
        rel * (1.0 + std::abs(a.sum(x.data(), n))));
  CHECK(std::abs(a.dot(x.data(), y.data(), n) - b.dot(x.data(), y.data(), n)) <=
        rel * (1.0 + std::abs(a.dot(x.data(), y.data(), n))));
  CHECK(std::abs(a.l1_dist(x.data(), y.data(), n) - b.l1_dist(x.data(), y.data(), n)) <=
        rel * (1.0 + a.l1_dist(x.data(), y.data(), n)));
  // max is exactly associative: bitwise agreement required.
  CHECK(a.max_abs_diff(x.data(), y.data(), n) == b.max_abs_diff(x.data(), y.data(), n));

  // triangle_scan: identical comparisons, so identical first-violation index.
  auto di = random_vector(rng, n, 0.0, 2.0);
  auto dj = random_vector(rng, n, 0.0, 2.0);
  for (double dij : {0.0, 0.3, 1.0, 2.5}) {
    CHECK(a.triangle_scan(di.data(), dj.data(), dij, 1e-9, n) ==
          b.triangle_scan(di.data(), dj.data(), dij, 1e-9, n));
  }
  // Plant the only violation at a known index and confirm both tables find it
  // (dij = 10 exceeds every natural entry, so nothing else can trip).
  if (n >= 3) {
    di[n / 2] = 100.0;
    const auto ka = a.triangle_scan(di.data(), dj.data(), 10.0, 0.0, n);
    const auto kb = b.triangle_scan(di.data(), dj.data(), 10.0, 0.0, n);
    CHECK(ka == static_cast<std::ptrdiff_t>(n / 2));
    CHECK(ka == kb);
  }
}

}  // namespace

TEST_SUITE_BEGIN("simd");

TEST_CASE("scalar kernels compute the obvious values") {
  const auto& k = simd::scalar_kernels();
  const std::vector<double> a = {1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> b = {2.0, 2.0, 2.0, 2.0, 2.0};
  CHECK(k.sum(a.data(), a.size()) == 15.0);
  CHECK(k.dot(a.data(), b.data(), a.size()) == 30.0);
  CHECK(k.l1_dist(a.data(), b.data(), a.size()) == doctest::Approx(1 + 0 + 1 + 2 + 3));
  CHECK(k.max_abs_diff(a.data(), b.data(), a.size()) == 3.0);
  CHECK(k.sum(a.data(), 0) == 0.0);
  CHECK(k.max_abs_diff(a.data(), b.data(), 0) == 0.0);
  CHECK(k.triangle_scan(a.data(), b.data(), 10.0, 0.0, a.size()) == -1);
  CHECK(k.triangle_scan(a.data(), b.data(), 0.5, 0.0, a.size()) == 2);  // 3 > 0.5+2
}

TEST_CASE("avx2 kernels match the scalar reference when available") {
  const simd::KernelTable* avx2 = simd::avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 unavailable on this CPU/build; equivalence check skipped");
    return;
  }
  // Sizes cover the vector body, the scalar tail, and the empty case.
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 8u, 31u, 64u, 1000u, 4097u}) {
    check_tables_agree(simd::scalar_kernels(), *avx2, n, 1000 + n);
  }
}

TEST_CASE("active table is one of the known tables") {
  const auto& active = simd::active_kernels();
  const bool is_scalar = &active == &simd::scalar_kernels();
  const bool is_avx2 = simd::avx2_kernels() != nullptr && &active == simd::avx2_kernels();
  CHECK((is_scalar || is_avx2));
  MESSAGE("active kernel table: ", std::string(active.name));
}

TEST_SUITE_END();

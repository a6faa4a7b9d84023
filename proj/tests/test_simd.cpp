#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hgnn/rng.hpp"
#include "hgnn/simd/kernels.hpp"

using namespace hgnn;
using simd::KernelTable;

namespace {

std::vector<double> random_vector(std::size_t n, SplitMix64& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-2.0, 2.0);
  return v;
}

const KernelTable* avx2_or_skip() {
  const KernelTable* t = simd::avx2_kernels();
  if (t == nullptr || !simd::cpu_supports(simd::Isa::kAvx2)) return nullptr;
  return t;
}

// Relative to the sum of absolute products, the natural scale of rounding.
void expect_close(double a, double b, double scale) {
  EXPECT_LE(std::abs(a - b), 1e-13 * (scale + 1.0)) << a << " vs " << b;
}

constexpr std::size_t kSizes[] = {0, 1, 3, 4, 5, 7, 8, 15, 16, 17, 33, 100, 257};

}  // namespace

TEST(Simd, ScalarTableIsComplete) {
  const KernelTable& s = simd::scalar_kernels();
  EXPECT_EQ(s.isa, simd::Isa::kScalar);
  EXPECT_NE(s.dot, nullptr);
  EXPECT_NE(s.gemm_nt, nullptr);
  EXPECT_NE(s.gather_dot, nullptr);
}

TEST(Simd, SelectScalarAlwaysWorks) {
  const simd::Isa before = simd::kernels().isa;
  ASSERT_TRUE(simd::select(simd::Isa::kScalar));
  EXPECT_EQ(simd::kernels().isa, simd::Isa::kScalar);
  simd::select(before);
}

TEST(Simd, DotAxpyDistanceMatchScalar) {
  const KernelTable* v = avx2_or_skip();
  if (!v) GTEST_SKIP() << "no AVX2";
  const KernelTable& s = simd::scalar_kernels();
  SplitMix64 rng(11);
  for (std::size_t n : kSizes) {
    const auto a = random_vector(n, rng);
    const auto b = random_vector(n, rng);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) scale += std::abs(a[i] * b[i]);
    expect_close(s.dot(a.data(), b.data(), n), v->dot(a.data(), b.data(), n), scale);
    expect_close(s.squared_distance(a.data(), b.data(), n),
                 v->squared_distance(a.data(), b.data(), n), 16.0 * n);

    auto y1 = b;
    auto y2 = b;
    s.axpy(0.37, a.data(), y1.data(), n);
    v->axpy(0.37, a.data(), y2.data(), n);
    for (std::size_t i = 0; i < n; ++i) expect_close(y1[i], y2[i], 4.0);
  }
}

TEST(Simd, GemmVariantsMatchScalar) {
  const KernelTable* v = avx2_or_skip();
  if (!v) GTEST_SKIP() << "no AVX2";
  const KernelTable& s = simd::scalar_kernels();
  SplitMix64 rng(12);
  const std::size_t dims[][3] = {{1, 1, 1}, {3, 5, 7}, {4, 8, 8}, {5, 9, 13}, {17, 6, 33}, {64, 50, 10}};
  for (const auto& d : dims) {
    const std::size_t m = d[0], k = d[1], n = d[2];
    const auto a = random_vector(m * k, rng);
    const auto b = random_vector(k * n, rng);
    std::vector<double> c1(m * n, 99.0), c2(m * n, -99.0);
    s.gemm_nn(a.data(), b.data(), c1.data(), m, k, n);
    v->gemm_nn(a.data(), b.data(), c2.data(), m, k, n);
    for (std::size_t i = 0; i < m * n; ++i) expect_close(c1[i], c2[i], 4.0 * k);

    // A is m x k, B is m x n: C = A^T B is k x n.
    const auto bt = random_vector(m * n, rng);
    std::vector<double> t1(k * n, 5.0), t2(k * n, -5.0);
    s.gemm_tn(a.data(), bt.data(), t1.data(), m, k, n);
    v->gemm_tn(a.data(), bt.data(), t2.data(), m, k, n);
    for (std::size_t i = 0; i < k * n; ++i) expect_close(t1[i], t2[i], 4.0 * m);

    // A is m x k, B is n x k: C = A B^T is m x n.
    const auto bn = random_vector(n * k, rng);
    std::vector<double> u1(m * n, 1.0), u2(m * n, 2.0);
    s.gemm_nt(a.data(), bn.data(), u1.data(), m, k, n);
    v->gemm_nt(a.data(), bn.data(), u2.data(), m, k, n);
    for (std::size_t i = 0; i < m * n; ++i) expect_close(u1[i], u2[i], 4.0 * k);
  }
}

TEST(Simd, GemmScalarMatchesTripleLoop) {
  const KernelTable& s = simd::scalar_kernels();
  SplitMix64 rng(13);
  const std::size_t m = 5, k = 7, n = 3;
  const auto a = random_vector(m * k, rng);
  const auto b = random_vector(k * n, rng);
  std::vector<double> c(m * n);
  s.gemm_nn(a.data(), b.data(), c.data(), m, k, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double ref = 0.0;
      for (std::size_t p = 0; p < k; ++p) ref += a[i * k + p] * b[p * n + j];
      expect_close(c[i * n + j], ref, 4.0 * k);
    }
  }
}

TEST(Simd, GatherDotMatchesScalar) {
  const KernelTable* v = avx2_or_skip();
  if (!v) GTEST_SKIP() << "no AVX2";
  const KernelTable& s = simd::scalar_kernels();
  SplitMix64 rng(14);
  const auto x = random_vector(300, rng);
  for (std::size_t nnz : kSizes) {
    std::vector<std::uint32_t> cols(nnz);
    for (auto& c : cols) c = static_cast<std::uint32_t>(rng.uniform_below(300));
    const auto vals = random_vector(nnz, rng);
    expect_close(s.gather_dot(vals.data(), cols.data(), x.data(), nnz),
                 v->gather_dot(vals.data(), cols.data(), x.data(), nnz), 4.0 * nnz);
  }
}

TEST(Simd, KernelsAreDeterministic) {
  const KernelTable& t = simd::kernels();
  SplitMix64 rng(15);
  const auto a = random_vector(1001, rng);
  const auto b = random_vector(1001, rng);
  const double first = t.dot(a.data(), b.data(), a.size());
  for (int i = 0; i < 5; ++i) EXPECT_EQ(first, t.dot(a.data(), b.data(), a.size()));
}

#include <gtest/gtest.h>

#include <cmath>

#include "hgnn/checks/oracles.hpp"
#include "hgnn/error.hpp"
#include "hgnn/pca.hpp"
#include "hgnn/rng.hpp"

using namespace hgnn;

namespace {

double pairwise_distance(const DenseMatrix& x, std::size_t i, std::size_t j) {
  double d = 0.0;
  for (std::size_t c = 0; c < x.cols(); ++c) d += std::pow(x(i, c) - x(j, c), 2);
  return std::sqrt(d);
}

}  // namespace

TEST(Pca, CollinearPoints) {
  const DenseMatrix x{{0, 0}, {1, 2}, {2, 4}, {-1, -2}, {3, 6}};
  const PcaModel one = pca_fit(x, 1);
  EXPECT_NEAR(one.components(0, 0), 1.0 / std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(one.components(1, 0), 2.0 / std::sqrt(5.0), 1e-12);
  const PcaModel two = pca_fit(x, 2);
  EXPECT_NEAR(two.explained_variance[1], 0.0, 1e-12);
}

TEST(Pca, OrthogonalCenteredRows) {
  // Rows are mean-zero and mutually orthogonal; covariance is diagonal.
  const DenseMatrix x{{3, 0, 0}, {-3, 0, 0}, {0, 2, 0}, {0, -2, 0}};
  const PcaModel m = pca_fit(x, 2);
  EXPECT_NEAR(m.explained_variance[0], 18.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.explained_variance[1], 8.0 / 3.0, 1e-12);
}

TEST(Pca, MatchesJacobiOracle) {
  SplitMix64 rng(5);
  const DenseMatrix x = checks::random_matrix(20, 6, rng);
  const PcaModel m = pca_fit(x, 3);
  const checks::SymmetricEigen eig = checks::jacobi_eigen(sample_covariance(x));
  DenseMatrix expected(6, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    const std::size_t src = 5 - c;  // ascending oracle order
    EXPECT_NEAR(m.explained_variance[c], eig.values[src], 1e-10);
    for (std::size_t r = 0; r < 6; ++r) expected(r, c) = eig.vectors(r, src);
  }
  canonicalize_signs(expected);
  EXPECT_LE(max_abs_diff(m.components, expected), 1e-8);
}

TEST(Pca, SignConvention) {
  SplitMix64 rng(6);
  const PcaModel m = pca_fit(checks::random_matrix(30, 5, rng), 5);
  for (std::size_t c = 0; c < 5; ++c) {
    std::size_t arg = 0;
    for (std::size_t r = 1; r < 5; ++r) {
      if (std::abs(m.components(r, c)) > std::abs(m.components(arg, c))) arg = r;
    }
    EXPECT_GT(m.components(arg, c), 0.0);
  }
  DenseMatrix tie{{-0.5}, {0.5}};
  canonicalize_signs(tie);
  EXPECT_EQ(tie, (DenseMatrix{{0.5}, {-0.5}}));
}

TEST(Pca, OrthonormalComponentsAndSortedVariance) {
  SplitMix64 rng(7);
  const PcaModel m = pca_fit(checks::random_matrix(40, 8, rng), 5);
  EXPECT_LE(max_abs_diff(matmul_tn(m.components, m.components), DenseMatrix::identity(5)), 1e-10);
  for (std::size_t i = 1; i < 5; ++i) {
    EXPECT_GE(m.explained_variance[i - 1], m.explained_variance[i]);
    EXPECT_GE(m.explained_variance[i], 0.0);
  }
}

TEST(Pca, FullRankTransformPreservesDistances) {
  SplitMix64 rng(8);
  const DenseMatrix x = checks::random_matrix(12, 4, rng);
  const DenseMatrix y = pca_transform(pca_fit(x, 4), x);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = i + 1; j < 12; ++j) {
      EXPECT_NEAR(pairwise_distance(x, i, j), pairwise_distance(y, i, j), 1e-9);
    }
  }
}

TEST(Pca, MeanRowMapsToZero) {
  SplitMix64 rng(9);
  const DenseMatrix x = checks::random_matrix(10, 5, rng);
  const PcaModel m = pca_fit(x, 3);
  DenseMatrix mean_row(1, 5);
  for (std::size_t c = 0; c < 5; ++c) mean_row(0, c) = m.mean[c];
  const DenseMatrix y = pca_transform(m, mean_row);
  for (double v : y.values()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Pca, TransformedCovarianceIsDiagonal) {
  SplitMix64 rng(10);
  const DenseMatrix x = checks::random_matrix(25, 6, rng);
  const PcaModel m = pca_fit(x, 4);
  const DenseMatrix y = pca_transform(m, x);
  std::vector<double> mean;
  const DenseMatrix cov = sample_covariance(y, &mean);
  for (double v : mean) EXPECT_NEAR(v, 0.0, 1e-9);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(cov(i, j), i == j ? m.explained_variance[i] : 0.0, 1e-8);
    }
  }
}

TEST(Pca, ReconstructionErrorNonincreasingInD) {
  SplitMix64 rng(11);
  const DenseMatrix x = checks::random_matrix(30, 7, rng);
  double previous = INFINITY;
  for (std::size_t d = 1; d <= 7; ++d) {
    const PcaModel m = pca_fit(x, d);
    const DenseMatrix back = matmul_nt(pca_transform(m, x), m.components);
    double err = 0.0;
    for (std::size_t i = 0; i < 30; ++i) {
      for (std::size_t c = 0; c < 7; ++c) err += std::pow(x(i, c) - m.mean[c] - back(i, c), 2);
    }
    EXPECT_LE(err, previous + 1e-9);
    previous = err;
  }
  EXPECT_NEAR(previous, 0.0, 1e-18 + 1e-12);
}

TEST(Pca, DeterministicAndParameterChecks) {
  SplitMix64 rng(12);
  const DenseMatrix x = checks::random_matrix(10, 4, rng);
  const PcaModel a = pca_fit(x, 2);
  const PcaModel b = pca_fit(x, 2);
  EXPECT_EQ(a.components, b.components);
  EXPECT_EQ(a.explained_variance, b.explained_variance);
  EXPECT_THROW(pca_fit(x, 0), ParameterError);
  EXPECT_THROW(pca_fit(x, 5), ParameterError);
  EXPECT_THROW(pca_fit(checks::random_matrix(3, 5, rng), 3), ParameterError);
  EXPECT_THROW(pca_transform(a, DenseMatrix(2, 3)), ShapeError);
}

#pragma once

#include <cstddef>
#include <vector>

#include "hgnn/linalg/dense_matrix.hpp"

namespace hgnn {

// Principal components of a centered data matrix. Columns of `components`
// are orthonormal and ordered by nonincreasing explained variance; within
// each column the entry of largest magnitude is positive (ties: lowest row).
struct PcaModel {
  std::vector<double> mean;        // length m
  DenseMatrix components;          // m x d
  std::vector<double> explained_variance;  // length d

  std::size_t input_dim() const noexcept { return mean.size(); }
  std::size_t output_dim() const noexcept { return components.cols(); }
};

// Eigendecomposition of the sample covariance X_c^T X_c / (n - 1).
// Requires 1 <= d <= min(n - 1, m).
PcaModel pca_fit(const DenseMatrix& x, std::size_t d);

// (X - 1 mean^T) * components
DenseMatrix pca_transform(const PcaModel& model, const DenseMatrix& x);

// Centered covariance, exposed for tests and diagnostics.
DenseMatrix sample_covariance(const DenseMatrix& x, std::vector<double>* mean_out = nullptr);

// Flips each column so its largest-magnitude entry is positive.
void canonicalize_signs(DenseMatrix& columns);

}  // namespace hgnn

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hgnn/linalg/dense_matrix.hpp"

namespace hgnn {

// Stored entries with magnitude below this are dropped at construction.
inline constexpr double kPruneThreshold = 1e-15;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix. Immutable once built; column indices are
// strictly increasing within each row and no stored value is below
// kPruneThreshold in magnitude.
class SparseMatrix {
 public:
  using Index = std::uint32_t;

  SparseMatrix() = default;
  // Validates the CSR invariants (throws ShapeError) and prunes tiny values.
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values);

  // Duplicates are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix from_dense(const DenseMatrix& dense);
  static SparseMatrix identity(std::size_t n);
  static SparseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Index> row_cols(std::size_t i) const noexcept {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_values(std::size_t i) const noexcept {
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  // Stored value or 0.
  double at(std::size_t i, std::size_t j) const noexcept;

  DenseMatrix to_dense() const;
  SparseMatrix transpose() const;
  std::vector<double> row_sums() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

// y = S x (length checks throw ShapeError).
void spmv(const SparseMatrix& s, std::span<const double> x, std::span<double> y);

// Row i of the result is accumulated over row i's stored entries in column
// order; the order never depends on thread count or data.
DenseMatrix sparse_dense_mul(const SparseMatrix& s, const DenseMatrix& x);

SparseMatrix sparse_sparse_mul(const SparseMatrix& a, const SparseMatrix& b);

// Entry (i,j) becomes left[i] * S(i,j) * right[j]; a missing side counts as 1.
SparseMatrix diag_scale(const SparseMatrix& s, std::optional<std::span<const double>> left,
                        std::optional<std::span<const double>> right);

}  // namespace hgnn

#include "hgnn/linalg/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/simd/kernels.hpp"

namespace hgnn {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols,
                           std::vector<std::size_t> row_offsets,
                           std::vector<Index> col_indices, std::vector<double> values)
    : rows_(rows), cols_(cols) {
  if (cols > std::numeric_limits<Index>::max()) {
    throw ShapeError("SparseMatrix: column count exceeds 32-bit index range");
  }
  if (row_offsets.size() != rows + 1 || row_offsets.front() != 0 ||
      col_indices.size() != values.size() || row_offsets.back() != values.size()) {
    throw ShapeError("SparseMatrix: inconsistent CSR array lengths");
  }
  row_offsets_.assign(1, 0);
  row_offsets_.reserve(rows + 1);
  col_indices_.reserve(col_indices.size());
  values_.reserve(values.size());
  for (std::size_t i = 0; i < rows; ++i) {
    if (row_offsets[i + 1] < row_offsets[i]) throw ShapeError("SparseMatrix: offsets decrease");
    for (std::size_t t = row_offsets[i]; t < row_offsets[i + 1]; ++t) {
      if (col_indices[t] >= cols) throw ShapeError("SparseMatrix: column index out of range");
      if (t > row_offsets[i] && col_indices[t] <= col_indices[t - 1]) {
        throw ShapeError(fmt::format("SparseMatrix: row {} columns not strictly increasing", i));
      }
      if (std::abs(values[t]) < kPruneThreshold) continue;
      col_indices_.push_back(col_indices[t]);
      values_.push_back(values[t]);
    }
    row_offsets_.push_back(values_.size());
  }
}

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= rows || t.col >= cols) throw ShapeError("from_triplets: index out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<Index> ci;
  std::vector<double> vals;
  ci.reserve(triplets.size());
  vals.reserve(triplets.size());
  std::size_t t = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    while (t < triplets.size() && triplets[t].row == i) {
      const std::size_t c = triplets[t].col;
      double v = 0.0;
      while (t < triplets.size() && triplets[t].row == i && triplets[t].col == c) {
        v += triplets[t].value;
        ++t;
      }
      ci.push_back(static_cast<Index>(c));
      vals.push_back(v);
    }
    offsets[i + 1] = vals.size();
  }
  return SparseMatrix(rows, cols, std::move(offsets), std::move(ci), std::move(vals));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
  std::vector<std::size_t> offsets(dense.rows() + 1, 0);
  std::vector<Index> ci;
  std::vector<double> vals;
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        ci.push_back(static_cast<Index>(j));
        vals.push_back(dense(i, j));
      }
    }
    offsets[i + 1] = vals.size();
  }
  return SparseMatrix(dense.rows(), dense.cols(), std::move(offsets), std::move(ci),
                      std::move(vals));
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  return diagonal(std::vector<double>(n, 1.0));
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> offsets(n + 1);
  std::vector<Index> ci(n);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i + 1] = i + 1;
    ci[i] = static_cast<Index>(i);
  }
  return SparseMatrix(n, n, std::move(offsets), std::move(ci), {d.begin(), d.end()});
}

double SparseMatrix::at(std::size_t i, std::size_t j) const noexcept {
  if (i >= rows_ || j >= cols_) return 0.0;
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<Index>(j));
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_offsets_[i] + static_cast<std::size_t>(it - cols.begin())];
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t t = row_offsets_[i]; t < row_offsets_[i + 1]; ++t) {
      d(i, col_indices_[t]) = values_[t];
    }
  }
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> offsets(cols_ + 1, 0);
  for (Index c : col_indices_) ++offsets[c + 1];
  for (std::size_t j = 0; j < cols_; ++j) offsets[j + 1] += offsets[j];
  std::vector<std::size_t> next(offsets.begin(), offsets.end() - 1);
  std::vector<Index> ci(nnz());
  std::vector<double> vals(nnz());
  // Visiting rows in order keeps each output row sorted.
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t t = row_offsets_[i]; t < row_offsets_[i + 1]; ++t) {
      const std::size_t dst = next[col_indices_[t]]++;
      ci[dst] = static_cast<Index>(i);
      vals[dst] = values_[t];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(offsets), std::move(ci), std::move(vals));
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> s(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t t = row_offsets_[i]; t < row_offsets_[i + 1]; ++t) s[i] += values_[t];
  return s;
}

void spmv(const SparseMatrix& s, std::span<const double> x, std::span<double> y) {
  if (x.size() != s.cols() || y.size() != s.rows()) {
    throw ShapeError(fmt::format("spmv: {}x{} matrix, x of {}, y of {}", s.rows(), s.cols(),
                                 x.size(), y.size()));
  }
  const auto& k = simd::kernels();
  const auto offsets = s.row_offsets();
  const double* vals = s.values().data();
  const SparseMatrix::Index* cols = s.col_indices().data();
  for (std::size_t i = 0; i < s.rows(); ++i) {
    y[i] = k.gather_dot(vals + offsets[i], cols + offsets[i], x.data(),
                        offsets[i + 1] - offsets[i]);
  }
}

DenseMatrix sparse_dense_mul(const SparseMatrix& s, const DenseMatrix& x) {
  if (s.cols() != x.rows()) {
    throw ShapeError(fmt::format("sparse_dense_mul: {}x{} times {}x{}", s.rows(), s.cols(),
                                 x.rows(), x.cols()));
  }
  const auto& k = simd::kernels();
  DenseMatrix y(s.rows(), x.cols());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto cols = s.row_cols(i);
    const auto vals = s.row_values(i);
    double* yi = y.row(i).data();
    for (std::size_t t = 0; t < cols.size(); ++t) {
      k.axpy(vals[t], x.row(cols[t]).data(), yi, x.cols());
    }
  }
  return y;
}

SparseMatrix sparse_sparse_mul(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError(fmt::format("sparse_sparse_mul: {}x{} times {}x{}", a.rows(), a.cols(),
                                 b.rows(), b.cols()));
  }
  // Gustavson's row-by-row product with a dense accumulator.
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<char> seen(b.cols(), 0);
  std::vector<SparseMatrix::Index> pattern;
  std::vector<std::size_t> offsets(a.rows() + 1, 0);
  std::vector<SparseMatrix::Index> ci;
  std::vector<double> vals;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    pattern.clear();
    const auto acols = a.row_cols(i);
    const auto avals = a.row_values(i);
    for (std::size_t t = 0; t < acols.size(); ++t) {
      const auto bcols = b.row_cols(acols[t]);
      const auto bvals = b.row_values(acols[t]);
      for (std::size_t u = 0; u < bcols.size(); ++u) {
        const auto j = bcols[u];
        if (!seen[j]) {
          seen[j] = 1;
          pattern.push_back(j);
        }
        acc[j] += avals[t] * bvals[u];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (auto j : pattern) {
      if (std::abs(acc[j]) >= kPruneThreshold) {
        ci.push_back(j);
        vals.push_back(acc[j]);
      }
      acc[j] = 0.0;
      seen[j] = 0;
    }
    offsets[i + 1] = vals.size();
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(offsets), std::move(ci), std::move(vals));
}

SparseMatrix diag_scale(const SparseMatrix& s, std::optional<std::span<const double>> left,
                        std::optional<std::span<const double>> right) {
  if (left && left->size() != s.rows()) {
    throw ShapeError(fmt::format("diag_scale: left has {} entries for {} rows", left->size(),
                                 s.rows()));
  }
  if (right && right->size() != s.cols()) {
    throw ShapeError(fmt::format("diag_scale: right has {} entries for {} cols", right->size(),
                                 s.cols()));
  }
  std::vector<double> vals(s.values().begin(), s.values().end());
  for (std::size_t i = 0; i < s.rows(); ++i) {
    const auto cols = s.row_cols(i);
    for (std::size_t t = 0; t < cols.size(); ++t) {
      double& v = vals[s.row_offsets()[i] + t];
      if (left) v = (*left)[i] * v;
      if (right) v = v * (*right)[cols[t]];
    }
  }
  return SparseMatrix(s.rows(), s.cols(), {s.row_offsets().begin(), s.row_offsets().end()},
                      {s.col_indices().begin(), s.col_indices().end()}, std::move(vals));
}

}  // namespace hgnn

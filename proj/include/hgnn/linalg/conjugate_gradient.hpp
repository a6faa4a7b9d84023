#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hgnn/linalg/dense_matrix.hpp"

namespace hgnn {

// y = A x for a fixed symmetric positive-definite A.
using LinearOperator = std::function<void(std::span<const double> x, std::span<double> y)>;

struct CgOptions {
  double tol = 1e-6;  // relative residual ||Ax - b|| / ||b||
  std::size_t max_iter = 1000;
};

struct CgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double residual = 0.0;  // relative, measured from an explicit A x
  bool converged = false;
};

// Unpreconditioned CG from x0 = 0. Hitting max_iter is reported through
// `converged`, not thrown; a non-finite intermediate throws NumericalError.
CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> b,
                            const CgOptions& options = {});

struct ColumnSolve {
  DenseMatrix x;
  std::vector<CgResult> columns;  // x vectors moved out; stats only
  double worst_residual = 0.0;
  bool all_converged = true;
};

// Solves A X = B one column at a time. Columns may be spread over `workers`
// threads; every column is computed exactly as a serial call would.
ColumnSolve solve_columns(const LinearOperator& apply, const DenseMatrix& b,
                          const CgOptions& options = {}, std::size_t workers = 1);

}  // namespace hgnn

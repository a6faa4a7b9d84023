#include "hgnn/ssl.hpp"

#include <fmt/format.h>

#include "hgnn/error.hpp"

namespace hgnn {

DenseMatrix propagate(const PropagationOperator& op, const DenseMatrix& rhs,
                      const PropagationConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw ParameterError(fmt::format("propagate: alpha = {} outside (0, 1)", cfg.alpha));
  }
  if (!op.is_symmetric()) {
    throw ParameterError(fmt::format("propagate: CG needs a symmetric operator, got {}",
                                     to_string(op.normalization)));
  }
  if (rhs.rows() != op.size()) {
    throw ShapeError(fmt::format("propagate: operator is {}x{}, right-hand side has {} rows",
                                 op.size(), op.size(), rhs.rows()));
  }
  const double alpha = cfg.alpha;
  const SparseMatrix& theta = op.matrix;
  const LinearOperator apply = [&theta, alpha](std::span<const double> x, std::span<double> y) {
    spmv(theta, x, y);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - alpha * y[i];
  };
  ColumnSolve solved = solve_columns(apply, rhs, {cfg.tol, cfg.max_iter}, cfg.workers);
  if (!solved.all_converged) {
    throw SolverError(fmt::format("propagate: CG did not reach tol {} in {} iterations "
                                  "(worst relative residual {:.3e})",
                                  cfg.tol, cfg.max_iter, solved.worst_residual),
                      solved.worst_residual);
  }
  for (double& v : solved.x.values()) v *= (1.0 - alpha);
  return std::move(solved.x);
}

DenseMatrix propagate_labels(const PropagationOperator& op, const LabelMatrix& y,
                             const PropagationConfig& cfg) {
  if (y.scheme != LabelScheme::kPlusMinusOne) {
    throw ParameterError("propagate_labels: expects the +-1 label encoding");
  }
  return propagate(op, y.values, cfg);
}

DenseMatrix propagate_features(const PropagationOperator& op, const DenseMatrix& x,
                               const PropagationConfig& cfg) {
  if (op.normalization != Normalization::kSym) {
    throw ParameterError("propagate_features: expects the symmetric hypergraph operator");
  }
  return propagate(op, x, cfg);
}

}  // namespace hgnn

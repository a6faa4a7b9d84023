#pragma once

#include <cstddef>

#include "hgnn/hypergraph.hpp"
#include "hgnn/labels.hpp"
#include "hgnn/linalg/conjugate_gradient.hpp"

namespace hgnn {

struct PropagationConfig {
  double alpha = 0.99;  // strictly inside (0, 1)
  double tol = 1e-6;
  std::size_t max_iter = 1000;
  std::size_t workers = 1;  // columns solved concurrently
};

// F = (1 - alpha) (I - alpha Theta)^-1 B, one CG solve per column of B.
// Theta must be symmetric (sym or graph_sym). Throws SolverError carrying
// the worst relative residual if a column misses cfg.tol within max_iter.
DenseMatrix propagate(const PropagationOperator& op, const DenseMatrix& rhs,
                      const PropagationConfig& cfg);

// Classic graph / hypergraph label spreading on a +-1 label matrix.
DenseMatrix propagate_labels(const PropagationOperator& op, const LabelMatrix& y,
                             const PropagationConfig& cfg);

// Feature smoothing ahead of the proposed network; the right-hand side is
// the raw feature matrix.
DenseMatrix propagate_features(const PropagationOperator& op, const DenseMatrix& x,
                               const PropagationConfig& cfg);

}  // namespace hgnn

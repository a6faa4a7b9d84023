#pragma once

// Dense reference implementations used to check the sparse, iterative and
// vectorized code paths. Everything here is O(n^3) or worse and meant for
// small inputs only.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hgnn/hypergraph.hpp"
#include "hgnn/linalg/dense_matrix.hpp"
#include "hgnn/nn.hpp"
#include "hgnn/rng.hpp"

namespace hgnn::checks {

// Triple loop, no kernels.
DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b);

// Gaussian elimination with partial pivoting; solves A X = B.
DenseMatrix dense_solve(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix dense_inverse(const DenseMatrix& a);

struct SymmetricEigen {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column i pairs with values[i]
};

// Cyclic Jacobi rotations until the off-diagonal norm is below 1e-14 of the
// Frobenius norm.
SymmetricEigen jacobi_eigen(const DenseMatrix& a);

// Theta straight from the definitions with a dense incidence matrix.
DenseMatrix dense_hypergraph_operator(std::size_t n,
                                      const std::vector<std::vector<std::size_t>>& edges,
                                      const std::vector<double>& weights,
                                      Normalization normalization);

// (1 - alpha) (I - alpha Theta)^-1 B via dense_inverse.
DenseMatrix dense_propagation(const DenseMatrix& theta, const DenseMatrix& b, double alpha);

// Masked cross-entropy plus weight decay of the two-layer network, computed
// densely (Z = softmax(Theta ReLU(Theta X theta1) theta2)).
double dense_network_loss(const DenseMatrix& theta, const DenseMatrix& x,
                          const TwoLayerParams& params, const DenseMatrix& y_onehot,
                          const std::vector<std::size_t>& labeled, double weight_decay);

// Central differences of f at params, one entry at a time.
TwoLayerParams finite_difference_gradient(const std::function<double(const TwoLayerParams&)>& f,
                                          const TwoLayerParams& params, double step);

// Max over entries of |a - b| / max(|a|, |b|, floor).
double max_relative_error(const DenseMatrix& a, const DenseMatrix& b, double floor = 1e-8);

// Random hyperedges (sizes 2..max_edge_size) over n >= 2 vertices; every
// vertex ends up in at least one edge.
std::vector<std::vector<std::size_t>> random_hyperedges(std::size_t n, std::size_t num_edges,
                                                        std::size_t max_edge_size,
                                                        SplitMix64& rng);

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, SplitMix64& rng, double lo = -1.0,
                          double hi = 1.0);

// All-pairs distances sorted with std::sort on (distance, index).
KnnTable brute_force_knn(const DenseMatrix& x, std::size_t k);

}  // namespace hgnn::checks

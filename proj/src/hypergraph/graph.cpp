#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/hypergraph.hpp"

namespace hgnn {

double auto_sigma(const KnnTable& knn) {
  double s = 0.0;
  for (std::size_t i = 0; i < knn.n; ++i) s += std::sqrt(knn.distances2(i)[knn.k - 1]);
  return s / static_cast<double>(knn.n);
}

namespace {

PropagationOperator normalized_adjacency(const KnnTable& knn, Sigma sigma, bool self_loops) {
  const double s = sigma ? *sigma : auto_sigma(knn);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DegenerateStructureError(
        fmt::format("graph: kernel bandwidth must be positive, got {}", s));
  }
  const double inv_two_s2 = 1.0 / (2.0 * s * s);
  // Either direction of a kNN relation creates the edge. The distance is the
  // same seen from both ends, so duplicate (i, j) records are interchangeable.
  std::vector<Triplet> edges;
  edges.reserve(2 * knn.n * knn.k);
  for (std::size_t i = 0; i < knn.n; ++i) {
    const auto nb = knn.neighbors(i);
    const auto d2 = knn.distances2(i);
    for (std::size_t t = 0; t < knn.k; ++t) {
      edges.push_back({i, nb[t], d2[t]});
      edges.push_back({nb[t], i, d2[t]});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const Triplet& a, const Triplet& b) {
                            return a.row == b.row && a.col == b.col;
                          }),
              edges.end());
  std::vector<Triplet> adj;
  adj.reserve(edges.size() + (self_loops ? knn.n : 0));
  for (const Triplet& e : edges) adj.push_back({e.row, e.col, std::exp(-e.value * inv_two_s2)});
  if (self_loops) {
    for (std::size_t i = 0; i < knn.n; ++i) adj.push_back({i, i, 1.0});
  }
  const SparseMatrix a = SparseMatrix::from_triplets(knn.n, knn.n, std::move(adj));
  std::vector<double> deg = a.row_sums();
  for (std::size_t i = 0; i < knn.n; ++i) {
    if (!(deg[i] > 0.0)) {
      throw DegenerateStructureError(fmt::format("graph: vertex {} is isolated", i));
    }
    deg[i] = 1.0 / std::sqrt(deg[i]);
  }
  PropagationOperator op;
  op.normalization = self_loops ? Normalization::kGcn : Normalization::kGraphSym;
  op.matrix = diag_scale(a, deg, deg);
  return op;
}

}  // namespace

PropagationOperator build_knn_graph(const KnnTable& knn, Sigma sigma) {
  return normalized_adjacency(knn, sigma, false);
}

PropagationOperator build_knn_graph(const DenseMatrix& x, std::size_t k, Sigma sigma) {
  return build_knn_graph(knn_indices(x, k), sigma);
}

PropagationOperator gcn_operator(const KnnTable& knn, Sigma sigma) {
  return normalized_adjacency(knn, sigma, true);
}

PropagationOperator gcn_operator(const DenseMatrix& x, std::size_t k, Sigma sigma) {
  if (x.rows() == 1) {
    // No neighbours exist; A + I is just I.
    return {SparseMatrix::identity(1), Normalization::kGcn};
  }
  return gcn_operator(knn_indices(x, k), sigma);
}

}  // namespace hgnn

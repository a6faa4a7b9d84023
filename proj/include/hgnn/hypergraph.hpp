#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hgnn/linalg/dense_matrix.hpp"
#include "hgnn/linalg/sparse_matrix.hpp"

namespace hgnn {

// k nearest rows of every row (self excluded), ascending by squared
// Euclidean distance, ties broken by the lower row index.
struct KnnTable {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::uint32_t> indices;  // n * k, row-major
  std::vector<double> sq_distances;    // n * k

  std::span<const std::uint32_t> neighbors(std::size_t i) const noexcept {
    return {indices.data() + i * k, k};
  }
  std::span<const double> distances2(std::size_t i) const noexcept {
    return {sq_distances.data() + i * k, k};
  }
};

// Exact blocked brute force over all pairs. Throws ParameterError if k >= n
// or k == 0.
KnnTable knn_indices(const DenseMatrix& x, std::size_t k);

struct Hypergraph {
  SparseMatrix incidence;             // vertices x hyperedges, 0/1
  std::vector<double> edge_weights;   // w(e)
  std::vector<double> vertex_degrees; // d(v) = sum_e w(e) h(v, e)
  std::vector<double> edge_degrees;   // d(e) = sum_v h(v, e)

  std::size_t num_vertices() const noexcept { return incidence.rows(); }
  std::size_t num_edges() const noexcept { return incidence.cols(); }
  std::vector<std::size_t> edge_members(std::size_t e) const;
};

// Hypergraph over `num_vertices` vertices with the given hyperedges (member
// lists, duplicates ignored). Weights default to 1. Throws
// DegenerateStructureError for an edge with fewer than two members.
Hypergraph make_hypergraph(std::size_t num_vertices,
                           const std::vector<std::vector<std::size_t>>& edges,
                           std::vector<double> weights = {});

// One hyperedge e_j per row j: i joins e_j when i is among the k nearest
// neighbours of j or j is among those of i; j itself joins when
// include_centroid is set. Unit weights.
Hypergraph build_knn_hypergraph(const KnnTable& knn, bool include_centroid = true);
Hypergraph build_knn_hypergraph(const DenseMatrix& x, std::size_t k,
                                bool include_centroid = true);

enum class Normalization {
  kSym,       // D_v^-1/2 H W D_e^-1 H^T D_v^-1/2
  kRw,        // D_v^-1 H W D_e^-1 H^T
  kGraphSym,  // D^-1/2 A D^-1/2 on the kNN Gaussian graph
  kGcn,       // D~^-1/2 (A + I) D~^-1/2
};

std::string_view to_string(Normalization n) noexcept;
std::optional<Normalization> parse_normalization(std::string_view s) noexcept;

// The n x n smoothing matrix Theta shared by label propagation and the
// networks. For kSym and kGraphSym it is symmetric.
struct PropagationOperator {
  SparseMatrix matrix;
  Normalization normalization = Normalization::kSym;

  std::size_t size() const noexcept { return matrix.rows(); }
  bool is_symmetric() const noexcept {
    return normalization != Normalization::kRw;
  }
};

// Throws DegenerateStructureError on a zero vertex or edge degree and
// ParameterError for a graph normalization.
PropagationOperator hypergraph_operator(const Hypergraph& hg, Normalization normalization);

// Gaussian kernel bandwidth; nullopt means the mean distance to the k-th
// neighbour.
using Sigma = std::optional<double>;

double auto_sigma(const KnnTable& knn);

// Symmetrized kNN adjacency with weights exp(-|xi - xj|^2 / (2 sigma^2)),
// zero diagonal, normalized as D^-1/2 A D^-1/2.
PropagationOperator build_knn_graph(const KnnTable& knn, Sigma sigma = std::nullopt);
PropagationOperator build_knn_graph(const DenseMatrix& x, std::size_t k,
                                    Sigma sigma = std::nullopt);

// Same adjacency plus self loops, renormalized (the GCN propagation rule).
PropagationOperator gcn_operator(const KnnTable& knn, Sigma sigma = std::nullopt);
PropagationOperator gcn_operator(const DenseMatrix& x, std::size_t k,
                                 Sigma sigma = std::nullopt);

// Binary CSR cache file, little-endian:
//   bytes 0-7   magic "HGNNCSR\0"
//   u32         format version (1)
//   u32         normalization (0 sym, 1 rw, 2 graph_sym, 3 gcn)
//   u64 rows, u64 cols, u64 nnz
//   u64[rows+1] row offsets, u32[nnz] column indices, f64[nnz] values
void save_operator(const std::filesystem::path& path, const PropagationOperator& op);
PropagationOperator load_operator(const std::filesystem::path& path);

}  // namespace hgnn

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/hypergraph.hpp"

namespace hgnn {
namespace {

// rows[v] = sorted hyperedge ids containing v.
Hypergraph assemble(std::size_t num_vertices, std::size_t num_edges,
                    std::vector<std::vector<SparseMatrix::Index>> rows,
                    std::vector<double> weights) {
  if (weights.empty()) weights.assign(num_edges, 1.0);
  if (weights.size() != num_edges) throw ShapeError("hypergraph: one weight per hyperedge");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw ParameterError("hypergraph: edge weights must be positive and finite");
    }
  }
  std::vector<std::size_t> offsets(num_vertices + 1, 0);
  std::vector<SparseMatrix::Index> cols;
  for (std::size_t v = 0; v < num_vertices; ++v) {
    auto& r = rows[v];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    cols.insert(cols.end(), r.begin(), r.end());
    offsets[v + 1] = cols.size();
  }
  std::vector<double> ones(cols.size(), 1.0);

  Hypergraph hg;
  hg.incidence = SparseMatrix(num_vertices, num_edges, std::move(offsets), std::move(cols),
                              std::move(ones));
  hg.edge_weights = std::move(weights);
  hg.vertex_degrees.assign(num_vertices, 0.0);
  hg.edge_degrees.assign(num_edges, 0.0);
  for (std::size_t v = 0; v < num_vertices; ++v) {
    for (auto e : hg.incidence.row_cols(v)) {
      hg.vertex_degrees[v] += hg.edge_weights[e];
      hg.edge_degrees[e] += 1.0;
    }
  }
  for (std::size_t e = 0; e < num_edges; ++e) {
    if (hg.edge_degrees[e] < 2.0) {
      throw DegenerateStructureError(
          fmt::format("hypergraph: hyperedge {} has {} member(s), need at least 2", e,
                      hg.edge_degrees[e]));
    }
  }
  return hg;
}

}  // namespace

std::vector<std::size_t> Hypergraph::edge_members(std::size_t e) const {
  std::vector<std::size_t> members;
  for (std::size_t v = 0; v < num_vertices(); ++v) {
    if (incidence.at(v, e) != 0.0) members.push_back(v);
  }
  return members;
}

Hypergraph make_hypergraph(std::size_t num_vertices,
                           const std::vector<std::vector<std::size_t>>& edges,
                           std::vector<double> weights) {
  std::vector<std::vector<SparseMatrix::Index>> rows(num_vertices);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (std::size_t v : edges[e]) {
      if (v >= num_vertices) throw ShapeError("make_hypergraph: vertex id out of range");
      rows[v].push_back(static_cast<SparseMatrix::Index>(e));
    }
  }
  return assemble(num_vertices, edges.size(), std::move(rows), std::move(weights));
}

Hypergraph build_knn_hypergraph(const KnnTable& knn, bool include_centroid) {
  const std::size_t n = knn.n;
  // Hyperedge ids coincide with their centre vertex, so "i in e_j" is
  // recorded as edge j in row i.
  std::vector<std::vector<SparseMatrix::Index>> rows(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto ia = static_cast<SparseMatrix::Index>(a);
    if (include_centroid) rows[a].push_back(ia);
    for (auto b : knn.neighbors(a)) {
      rows[b].push_back(ia);  // b is a neighbour of a: b in e_a
      rows[a].push_back(b);   // a's neighbour is b: a in e_b
    }
  }
  return assemble(n, n, std::move(rows), {});
}

Hypergraph build_knn_hypergraph(const DenseMatrix& x, std::size_t k, bool include_centroid) {
  return build_knn_hypergraph(knn_indices(x, k), include_centroid);
}

std::string_view to_string(Normalization n) noexcept {
  switch (n) {
    case Normalization::kSym:
      return "sym";
    case Normalization::kRw:
      return "rw";
    case Normalization::kGraphSym:
      return "graph_sym";
    case Normalization::kGcn:
      return "gcn";
  }
  return "?";
}

std::optional<Normalization> parse_normalization(std::string_view s) noexcept {
  for (auto n : {Normalization::kSym, Normalization::kRw, Normalization::kGraphSym,
                 Normalization::kGcn}) {
    if (to_string(n) == s) return n;
  }
  return std::nullopt;
}

PropagationOperator hypergraph_operator(const Hypergraph& hg, Normalization normalization) {
  if (normalization != Normalization::kSym && normalization != Normalization::kRw) {
    throw ParameterError("hypergraph_operator: normalization must be sym or rw");
  }
  const std::size_t n = hg.num_vertices();
  const std::size_t ne = hg.num_edges();
  std::vector<double> edge_scale(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    if (!(hg.edge_degrees[e] > 0.0)) {
      throw DegenerateStructureError(fmt::format("hyperedge {} has zero degree", e));
    }
    edge_scale[e] = hg.edge_weights[e] / hg.edge_degrees[e];
  }
  std::vector<double> left(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double d = hg.vertex_degrees[v];
    if (!(d > 0.0)) {
      throw DegenerateStructureError(fmt::format("vertex {} belongs to no hyperedge", v));
    }
    left[v] = normalization == Normalization::kSym ? 1.0 / std::sqrt(d) : 1.0 / d;
  }

  // H W D_e^-1 H^T
  const SparseMatrix hw = diag_scale(hg.incidence, std::nullopt, edge_scale);
  const SparseMatrix core = sparse_sparse_mul(hw, hg.incidence.transpose());

  PropagationOperator op;
  op.normalization = normalization;
  op.matrix = normalization == Normalization::kSym ? diag_scale(core, left, left)
                                                   : diag_scale(core, left, std::nullopt);
  return op;
}

}  // namespace hgnn

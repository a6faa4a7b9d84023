#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/hypergraph.hpp"
#include "hgnn/simd/kernels.hpp"

namespace hgnn {
namespace {

constexpr std::size_t kBlock = 64;

// Fixed-capacity sorted list of the best candidates for one row. The order
// (distance, index) is total, so the final contents do not depend on the
// order in which candidates arrive.
class TopK {
 public:
  TopK(double* dist, std::uint32_t* idx, std::size_t k) : dist_(dist), idx_(idx), k_(k) {}

  void offer(double d, std::uint32_t j) {
    if (count_ == k_ && !less(d, j, dist_[k_ - 1], idx_[k_ - 1])) return;
    std::size_t pos = count_ < k_ ? count_++ : k_ - 1;
    while (pos > 0 && less(d, j, dist_[pos - 1], idx_[pos - 1])) {
      dist_[pos] = dist_[pos - 1];
      idx_[pos] = idx_[pos - 1];
      --pos;
    }
    dist_[pos] = d;
    idx_[pos] = j;
  }

 private:
  static bool less(double d1, std::uint32_t i1, double d2, std::uint32_t i2) {
    return d1 < d2 || (d1 == d2 && i1 < i2);
  }
  double* dist_;
  std::uint32_t* idx_;
  std::size_t k_;
  std::size_t count_ = 0;
};

}  // namespace

KnnTable knn_indices(const DenseMatrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  if (k == 0 || k >= n) {
    throw ParameterError(fmt::format("knn_indices: need 1 <= k < n, got k = {}, n = {}", k, n));
  }
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw ParameterError("knn_indices: too many rows for 32-bit indices");
  }
  KnnTable out;
  out.n = n;
  out.k = k;
  out.indices.assign(n * k, 0);
  out.sq_distances.assign(n * k, 0.0);
  std::vector<TopK> best;
  best.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    best.emplace_back(out.sq_distances.data() + i * k, out.indices.data() + i * k, k);
  }

  const auto& kern = simd::kernels();
  const std::size_t dim = x.cols();
  // Each unordered pair is evaluated once and offered to both rows; the
  // kernel result is symmetric because (a - b)^2 == (b - a)^2 exactly.
  for (std::size_t bi = 0; bi < n; bi += kBlock) {
    const std::size_t ei = std::min(n, bi + kBlock);
    for (std::size_t bj = bi; bj < n; bj += kBlock) {
      const std::size_t ej = std::min(n, bj + kBlock);
      for (std::size_t i = bi; i < ei; ++i) {
        const double* xi = x.row(i).data();
        for (std::size_t j = std::max(bj, i + 1); j < ej; ++j) {
          const double d = kern.squared_distance(xi, x.row(j).data(), dim);
          best[i].offer(d, static_cast<std::uint32_t>(j));
          best[j].offer(d, static_cast<std::uint32_t>(i));
        }
      }
    }
  }
  return out;
}

}  // namespace hgnn

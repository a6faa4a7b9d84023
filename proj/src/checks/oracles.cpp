#include "hgnn/checks/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "hgnn/error.hpp"

namespace hgnn::checks {

DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("naive_matmul: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t p = 0; p < a.cols(); ++p) s += a(i, p) * b(p, j);
      c(i, j) = s;
    }
  }
  return c;
}

DenseMatrix dense_solve(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw ShapeError("dense_solve: shape mismatch");
  DenseMatrix m = a;
  DenseMatrix x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    }
    if (m(piv, k) == 0.0) throw NumericalError("dense_solve: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double s = x(k, j);
      for (std::size_t p = k + 1; p < n; ++p) s -= m(k, p) * x(p, j);
      x(k, j) = s / m(k, k);
    }
  }
  return x;
}

DenseMatrix dense_inverse(const DenseMatrix& a) {
  return dense_solve(a, DenseMatrix::identity(a.rows()));
}

SymmetricEigen jacobi_eigen(const DenseMatrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw ShapeError("jacobi_eigen: matrix must be square");
  DenseMatrix a = input;
  DenseMatrix v = DenseMatrix::identity(n);
  double total = 0.0;
  for (double x : a.values()) total += x * x;
  const double target = 1e-14 * std::sqrt(total);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    }
    if (std::sqrt(off) <= target) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigen out;
  out.vectors = DenseMatrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values.push_back(a(order[c], order[c]));
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  return out;
}

DenseMatrix dense_hypergraph_operator(std::size_t n,
                                      const std::vector<std::vector<std::size_t>>& edges,
                                      const std::vector<double>& weights,
                                      Normalization normalization) {
  const std::size_t m = edges.size();
  DenseMatrix h(n, m);
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t v : edges[e]) h(v, e) = 1.0;
  }
  std::vector<double> w(m, 1.0);
  if (!weights.empty()) w = weights;
  std::vector<double> dv(n, 0.0), de(m, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t e = 0; e < m; ++e) {
      dv[v] += w[e] * h(v, e);
      de[e] += h(v, e);
    }
  }
  DenseMatrix theta(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0.0;
      for (std::size_t e = 0; e < m; ++e) s += h(u, e) * w[e] / de[e] * h(v, e);
      if (normalization == Normalization::kSym) {
        theta(u, v) = s / std::sqrt(dv[u] * dv[v]);
      } else if (normalization == Normalization::kRw) {
        theta(u, v) = s / dv[u];
      } else {
        throw ParameterError("dense_hypergraph_operator: sym or rw only");
      }
    }
  }
  return theta;
}

DenseMatrix dense_propagation(const DenseMatrix& theta, const DenseMatrix& b, double alpha) {
  const std::size_t n = theta.rows();
  DenseMatrix a = DenseMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) -= alpha * theta(i, j);
  }
  return (1.0 - alpha) * naive_matmul(dense_inverse(a), b);
}

double dense_network_loss(const DenseMatrix& theta, const DenseMatrix& x,
                          const TwoLayerParams& params, const DenseMatrix& y_onehot,
                          const std::vector<std::size_t>& labeled, double weight_decay) {
  DenseMatrix hidden = naive_matmul(naive_matmul(theta, x), params.theta1);
  for (double& v : hidden.values()) v = std::max(v, 0.0);
  const DenseMatrix logits = naive_matmul(naive_matmul(theta, hidden), params.theta2);
  double loss = 0.0;
  for (std::size_t i : labeled) {
    double mx = logits(i, 0);
    for (std::size_t c = 1; c < logits.cols(); ++c) mx = std::max(mx, logits(i, c));
    double z = 0.0;
    for (std::size_t c = 0; c < logits.cols(); ++c) z += std::exp(logits(i, c) - mx);
    const double log_z = mx + std::log(z);
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      loss -= y_onehot(i, c) * (logits(i, c) - log_z);
    }
  }
  loss /= static_cast<double>(labeled.size());
  double sq = 0.0;
  for (double v : params.theta1.values()) sq += v * v;
  for (double v : params.theta2.values()) sq += v * v;
  return loss + 0.5 * weight_decay * sq;
}

TwoLayerParams finite_difference_gradient(const std::function<double(const TwoLayerParams&)>& f,
                                          const TwoLayerParams& params, double step) {
  TwoLayerParams grad{DenseMatrix(params.theta1.rows(), params.theta1.cols()),
                      DenseMatrix(params.theta2.rows(), params.theta2.cols())};
  TwoLayerParams probe = params;
  auto sweep = [&](DenseMatrix& target, DenseMatrix& out) {
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double orig = target.values()[i];
      target.values()[i] = orig + step;
      const double up = f(probe);
      target.values()[i] = orig - step;
      const double down = f(probe);
      target.values()[i] = orig;
      out.values()[i] = (up - down) / (2.0 * step);
    }
  };
  sweep(probe.theta1, grad.theta1);
  sweep(probe.theta2, grad.theta2);
  return grad;
}

double max_relative_error(const DenseMatrix& a, const DenseMatrix& b, double floor) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_relative_error: shape mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.values()[i];
    const double y = b.values()[i];
    const double denom = std::max({std::abs(x), std::abs(y), floor});
    worst = std::max(worst, std::abs(x - y) / denom);
  }
  return worst;
}

std::vector<std::vector<std::size_t>> random_hyperedges(std::size_t n, std::size_t num_edges,
                                                        std::size_t max_edge_size,
                                                        SplitMix64& rng) {
  if (n < 2 || max_edge_size < 2) throw ParameterError("random_hyperedges: need n, size >= 2");
  const std::size_t cap = std::min(n, max_edge_size);
  std::vector<std::vector<std::size_t>> edges;
  std::vector<bool> covered(n, false);
  for (std::size_t e = 0; e < num_edges; ++e) {
    const std::size_t size = 2 + rng.uniform_below(cap - 1);
    std::set<std::size_t> members;
    while (members.size() < size) members.insert(rng.uniform_below(n));
    edges.emplace_back(members.begin(), members.end());
    for (std::size_t v : members) covered[v] = true;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (covered[v]) continue;
    std::size_t u = rng.uniform_below(n - 1);
    if (u >= v) ++u;
    edges.push_back({std::min(u, v), std::max(u, v)});
    covered[v] = covered[u] = true;
  }
  return edges;
}

DenseMatrix random_matrix(std::size_t rows, std::size_t cols, SplitMix64& rng, double lo,
                          double hi) {
  DenseMatrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

KnnTable brute_force_knn(const DenseMatrix& x, std::size_t k) {
  const std::size_t n = x.rows();
  if (k == 0 || k >= n) throw ParameterError("brute_force_knn: need 0 < k < n");
  KnnTable t;
  t.n = n;
  t.k = k;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double diff = x(i, c) - x(j, c);
        d += diff * diff;
      }
      all.emplace_back(d, j);
    }
    std::sort(all.begin(), all.end());
    for (std::size_t r = 0; r < k; ++r) {
      t.indices.push_back(static_cast<std::uint32_t>(all[r].second));
      t.sq_distances.push_back(all[r].first);
    }
  }
  return t;
}

}  // namespace hgnn::checks

#include "hgnn/pca.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "hgnn/error.hpp"

namespace hgnn {

DenseMatrix sample_covariance(const DenseMatrix& x, std::vector<double>* mean_out) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (n < 2) throw ParameterError("sample_covariance: need at least two rows");
  std::vector<double> mean(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = x.row(i);
    for (std::size_t t = 0; t < m; ++t) mean[t] += r[t];
  }
  for (double& v : mean) v /= static_cast<double>(n);

  DenseMatrix centered = x;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = centered.row(i);
    for (std::size_t t = 0; t < m; ++t) r[t] -= mean[t];
  }
  DenseMatrix cov = matmul_tn(centered, centered);
  const double scale = 1.0 / static_cast<double>(n - 1);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      // Symmetrize exactly; the kernel result is symmetric only up to rounding.
      const double v = 0.5 * (cov(a, b) + cov(b, a)) * scale;
      cov(a, b) = v;
      cov(b, a) = v;
    }
  }
  if (mean_out) *mean_out = std::move(mean);
  return cov;
}

void canonicalize_signs(DenseMatrix& columns) {
  for (std::size_t j = 0; j < columns.cols(); ++j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < columns.rows(); ++i) {
      if (std::abs(columns(i, j)) > std::abs(columns(best, j))) best = i;
    }
    if (columns.rows() > 0 && columns(best, j) < 0.0) {
      for (std::size_t i = 0; i < columns.rows(); ++i) columns(i, j) = -columns(i, j);
    }
  }
}

PcaModel pca_fit(const DenseMatrix& x, std::size_t d) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (d < 1 || n < 2 || d > std::min(n - 1, m)) {
    throw ParameterError(
        fmt::format("pca_fit: d = {} outside [1, min(n - 1, m)] for a {}x{} matrix", d, n, m));
  }
  PcaModel model;
  const DenseMatrix cov = sample_covariance(x, &model.mean);

  Eigen::MatrixXd c(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) c(a, b) = cov(a, b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("pca_fit: covariance eigendecomposition did not converge");
  }
  // Eigen returns ascending eigenvalues.
  const auto& evals = solver.eigenvalues();
  const auto& evecs = solver.eigenvectors();
  model.components = DenseMatrix(m, d);
  model.explained_variance.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto src = static_cast<Eigen::Index>(m - 1 - j);
    model.explained_variance[j] = std::max(0.0, evals(src));
    for (std::size_t i = 0; i < m; ++i) {
      model.components(i, j) = evecs(static_cast<Eigen::Index>(i), src);
    }
  }
  canonicalize_signs(model.components);
  return model;
}

DenseMatrix pca_transform(const PcaModel& model, const DenseMatrix& x) {
  if (x.cols() != model.input_dim()) {
    throw ShapeError(fmt::format("pca_transform: input has {} columns, model expects {}",
                                 x.cols(), model.input_dim()));
  }
  DenseMatrix centered = x;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto r = centered.row(i);
    for (std::size_t t = 0; t < r.size(); ++t) r[t] -= model.mean[t];
  }
  return matmul(centered, model.components);
}

}  // namespace hgnn

#include "hgnn/linalg/conjugate_gradient.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "hgnn/error.hpp"
#include "hgnn/simd/kernels.hpp"

namespace hgnn {
namespace {

void check_finite(double v, const char* what, std::size_t iter) {
  if (!std::isfinite(v)) {
    throw NumericalError(fmt::format("conjugate_gradient: non-finite {} at iteration {}", what,
                                     iter));
  }
}

}  // namespace

CgResult conjugate_gradient(const LinearOperator& apply, std::span<const double> b,
                            const CgOptions& options) {
  if (!(options.tol > 0.0)) throw ParameterError("conjugate_gradient: tol must be positive");
  const auto& k = simd::kernels();
  const std::size_t n = b.size();

  CgResult out;
  out.x.assign(n, 0.0);
  const double b_norm = std::sqrt(k.dot(b.data(), b.data(), n));
  check_finite(b_norm, "right-hand side", 0);
  if (b_norm == 0.0) {
    out.converged = true;
    return out;
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> p = r;
  std::vector<double> ap(n);
  double rr = k.dot(r.data(), r.data(), n);

  auto true_residual = [&] {
    apply(out.x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    rr = k.dot(r.data(), r.data(), n);
    return std::sqrt(rr) / b_norm;
  };

  const double tol = options.tol;
  while (out.iterations < options.max_iter) {
    if (std::sqrt(rr) / b_norm <= tol) {
      // The recursive residual drifts; confirm against the operator.
      const double res = true_residual();
      if (res <= tol) {
        out.residual = res;
        out.converged = true;
        return out;
      }
      p = r;
    }
    apply(p, ap);
    const double pap = k.dot(p.data(), ap.data(), n);
    check_finite(pap, "curvature p^T A p", out.iterations);
    if (pap <= 0.0) {
      throw NumericalError(fmt::format(
          "conjugate_gradient: operator not positive-definite (p^T A p = {}) at iteration {}",
          pap, out.iterations));
    }
    const double alpha = rr / pap;
    k.axpy(alpha, p.data(), out.x.data(), n);
    k.axpy(-alpha, ap.data(), r.data(), n);
    const double rr_next = k.dot(r.data(), r.data(), n);
    check_finite(rr_next, "residual", out.iterations);
    const double beta = rr_next / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rr = rr_next;
    ++out.iterations;
  }
  out.residual = true_residual();
  out.converged = out.residual <= tol;
  return out;
}

ColumnSolve solve_columns(const LinearOperator& apply, const DenseMatrix& b,
                          const CgOptions& options, std::size_t workers) {
  ColumnSolve out;
  out.x = DenseMatrix(b.rows(), b.cols());
  out.columns.resize(b.cols());
  std::vector<std::vector<double>> solutions(b.cols());
  std::vector<std::exception_ptr> errors(b.cols());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < b.cols(); j = next++) {
      try {
        const std::vector<double> rhs = b.column(j);
        CgResult res = conjugate_gradient(apply, rhs, options);
        solutions[j] = std::move(res.x);
        out.columns[j] = std::move(res);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(b.cols(), 1));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t j = 0; j < b.cols(); ++j) {
    out.x.set_column(j, solutions[j]);
    out.worst_residual = std::max(out.worst_residual, out.columns[j].residual);
    out.all_converged = out.all_converged && out.columns[j].converged;
  }
  return out;
}

}  // namespace hgnn

#pragma once

#include <cstddef>
#include <cstdint>

namespace hgnn::simd {

#define HGNN_DECLARE_KERNELS                                                  \
  double dot(const double* a, const double* b, std::size_t n);                \
  void axpy(double alpha, const double* x, double* y, std::size_t n);         \
  double squared_distance(const double* a, const double* b, std::size_t n);   \
  void gemm_nn(const double* a, const double* b, double* c, std::size_t m,    \
               std::size_t k, std::size_t n);                                 \
  void gemm_tn(const double* a, const double* b, double* c, std::size_t m,    \
               std::size_t k, std::size_t n);                                 \
  void gemm_nt(const double* a, const double* b, double* c, std::size_t m,    \
               std::size_t n, std::size_t p);                                 \
  double gather_dot(const double* values, const std::uint32_t* cols,          \
                    const double* x, std::size_t nnz);

namespace scalar {
HGNN_DECLARE_KERNELS
}

namespace avx2 {
HGNN_DECLARE_KERNELS
}

#undef HGNN_DECLARE_KERNELS

}  // namespace hgnn::simd

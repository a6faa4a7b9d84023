#pragma once

// Data-parallel inner loops used by linalg, the kNN search and the networks.
//
// Each kernel has a portable scalar reference and, on x86-64, an AVX2+FMA
// variant compiled in its own translation unit. The variant is picked once at
// first use from CPU detection; HGNN_SIMD=scalar|avx2|auto overrides it.
// Variants agree to rounding (FMA contraction and reduction order differ);
// within one variant every kernel is deterministic.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace hgnn::simd {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;
  const char* name;

  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);

  // Row-major products, output overwritten.
  //   gemm_nn: C[m x n] = A[m x k] * B[k x n]
  //   gemm_tn: C[k x n] = A[m x k]^T * B[m x n]
  //   gemm_nt: C[m x p] = A[m x n] * B[p x n]^T
  void (*gemm_nn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n);
  void (*gemm_tn)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t k, std::size_t n);
  void (*gemm_nt)(const double* a, const double* b, double* c, std::size_t m,
                  std::size_t n, std::size_t p);

  // sum_t values[t] * x[cols[t]]
  double (*gather_dot)(const double* values, const std::uint32_t* cols,
                       const double* x, std::size_t nnz);
};

const KernelTable& scalar_kernels() noexcept;
// Null when the binary was built without AVX2 support.
const KernelTable* avx2_kernels() noexcept;

bool cpu_supports(Isa isa) noexcept;

// Active table. Resolved on first call.
const KernelTable& kernels() noexcept;

// Forces a variant for the rest of the process; returns false (and changes
// nothing) if the CPU or the build cannot run it.
bool select(Isa isa) noexcept;

std::string_view to_string(Isa isa) noexcept;

}  // namespace hgnn::simd

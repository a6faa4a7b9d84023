#include <atomic>
#include <cstdlib>
#include <string_view>

#include "hgnn/simd/kernels.hpp"
#include "kernels_impl.hpp"

namespace hgnn::simd {
namespace {

constexpr KernelTable kScalarTable{
    Isa::kScalar,        "scalar",           scalar::dot,     scalar::axpy,
    scalar::squared_distance, scalar::gemm_nn, scalar::gemm_tn, scalar::gemm_nt,
    scalar::gather_dot,
};

#if HGNN_HAVE_AVX2
constexpr KernelTable kAvx2Table{
    Isa::kAvx2,        "avx2",           avx2::dot,     avx2::axpy,
    avx2::squared_distance, avx2::gemm_nn, avx2::gemm_tn, avx2::gemm_nt,
    avx2::gather_dot,
};
#endif

const KernelTable* resolve() noexcept {
  const char* env = std::getenv("HGNN_SIMD");
  const std::string_view want = env ? env : "auto";
  if (want == "scalar") return &kScalarTable;
  if (const KernelTable* t = avx2_kernels(); t && cpu_supports(Isa::kAvx2)) return t;
  return &kScalarTable;
}

std::atomic<const KernelTable*>& active() noexcept {
  static std::atomic<const KernelTable*> table{resolve()};
  return table;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

const KernelTable* avx2_kernels() noexcept {
#if HGNN_HAVE_AVX2
  return &kAvx2Table;
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if HGNN_HAVE_AVX2 && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels() noexcept { return *active().load(std::memory_order_acquire); }

bool select(Isa isa) noexcept {
  if (!cpu_supports(isa)) return false;
  const KernelTable* t = isa == Isa::kScalar ? &kScalarTable : avx2_kernels();
  if (!t) return false;
  active().store(t, std::memory_order_release);
  return true;
}

std::string_view to_string(Isa isa) noexcept {
  return isa == Isa::kAvx2 ? "avx2" : "scalar";
}

}  // namespace hgnn::simd

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace hgnn {

// SplitMix64 (Steele, Lea & Flood). 64-bit state, one state increment per
// 64-bit draw. Every derived draw below consumes a documented number of
// next_u64() calls so that sequences are reproducible from the algorithm
// description alone:
//   uniform_below(n) : rejection sampling, >= 1 draw
//   uniform01()      : 1 draw, top 53 bits
//   normal()         : 2 draws (Box-Muller, cosine branch only)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_below(std::uint64_t n) noexcept {
    // Reject the top partial block so every residue is equally likely.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  // Uniform real in [0, 1).
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  double normal() noexcept {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

// Derives an independent stream seed from a base seed and a salt.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) noexcept {
  SplitMix64 g(seed ^ (salt * 0xd1b54a32d192ed03ULL));
  g.next_u64();
  return g.next_u64();
}

}  // namespace hgnn

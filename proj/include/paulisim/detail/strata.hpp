#pragma once

#include <cstddef>

namespace paulisim::detail {

// Spread a residual index over a coefficient index by inserting a zero base-4
// digit at the position with the given stride.
inline std::size_t insert_zero_digit(std::size_t residual, std::size_t stride) {
  const std::size_t lo = residual % stride;
  const std::size_t hi = residual / stride;
  return hi * 4 * stride + lo;
}

// Base index (all target digits zero) of residual stratum r for two targets.
inline std::size_t stratum_base(std::size_t r, std::size_t stride_a, std::size_t stride_b) {
  const std::size_t small = stride_a < stride_b ? stride_a : stride_b;
  const std::size_t large = stride_a < stride_b ? stride_b : stride_a;
  return insert_zero_digit(insert_zero_digit(r, small), large);
}

// Parallelize coefficient sweeps only when the register is large enough to pay
// for the thread team.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

}  // namespace paulisim::detail

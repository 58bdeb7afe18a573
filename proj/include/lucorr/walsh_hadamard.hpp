#pragma once

#include <bit>
#include <cstddef>
#include <span>

#include "lucorr/error.hpp"

namespace lucorr {

/// In-place unnormalized Walsh-Hadamard transform in natural (Hadamard)
/// order: out[v] = sum_u (-1)^{popcount(u & v)} in[u]. Length must be a
/// power of two.
template <class T>
void walsh_hadamard(std::span<T> values) {
  const std::size_t n = values.size();
  if (n == 0 || !std::has_single_bit(n)) fail(ErrorKind::shape, "transform length must be a power of two");
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t block = 0; block < n; block += 2 * half) {
      for (std::size_t k = block; k < block + half; ++k) {
        const T a = values[k];
        const T b = values[k + half];
        values[k] = a + b;
        values[k + half] = a - b;
      }
    }
  }
}

}  // namespace lucorr

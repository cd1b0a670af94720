#pragma once

#include <vector>

#include "core/types.hpp"

namespace g2k {

// In-place radix-2 complex FFT; size must be a power of two.
// Forward: X_k = sum_j x_j e^{-2 pi i jk/N}. Inverse includes the 1/N.
void fft(std::vector<Complex>& data, bool inverse);

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace g2k

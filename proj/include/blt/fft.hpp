#pragma once

#include "blt/grid.hpp"

#include <span>

namespace blt::fft {

enum class Direction { Forward, Backward };

// Unnormalized in-place transforms. Forward uses e^{-2 pi i jk/n}, Backward e^{+2 pi i jk/n}.
void transform(std::span<Complex> data, Direction dir);
void transform_2d(ComplexMatrix& data, Direction dir);

/// Index k in [0, n) mapped to the signed frequency in [-n/2, n/2).
inline long signed_index(std::size_t k, std::size_t n) {
  const long kk = static_cast<long>(k);
  const long nn = static_cast<long>(n);
  return kk < (nn + 1) / 2 ? kk : kk - nn;
}

}  // namespace blt::fft

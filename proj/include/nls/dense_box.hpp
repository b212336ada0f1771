#pragma once

// Axis-aligned bounding boxes over Z^d with row-major linear indexing; the
// scratch layout shared by the convolution and triple-sum kernels.

#include <array>
#include <cstddef>
#include <cstdint>

#include "nls/lattice.hpp"

namespace nls {

struct LatticeBox {
  int dim = 1;
  std::array<std::int64_t, kMaxDim> lo{};
  std::array<std::int64_t, kMaxDim> extent{1, 1, 1};

  std::size_t volume() const;
  std::array<std::int64_t, kMaxDim> strides() const;
  /// Row-major offset of xi under the given strides (xi must be inside).
  std::int64_t offset(const LatticePoint& xi,
                      const std::array<std::int64_t, kMaxDim>& strides) const;
  LatticePoint point_at(std::size_t linear) const;
  bool contains(const LatticePoint& xi) const;
};

/// Smallest box containing the support; extent 1 at the origin when empty.
LatticeBox bounding_box(const SparseSpectrum& f);

/// Box of all a + b with a in x, b in y.
LatticeBox minkowski_sum(const LatticeBox& x, const LatticeBox& y);

}  // namespace nls

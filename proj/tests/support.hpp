#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nls/lattice.hpp"

namespace nls::test {

/// Random spectrum on the box |xi|_inf <= radius with about `count` modes.
inline SparseSpectrum random_spectrum(int dim, std::int64_t radius, int count, unsigned seed,
                                      double scale = 1.0) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::int64_t> coord(-radius, radius);
  std::normal_distribution<double> amp(0.0, scale);
  std::vector<SparseSpectrum::Entry> e;
  for (int i = 0; i < count; ++i) {
    LatticePoint xi(dim);
    for (int k = 0; k < dim; ++k) xi[k] = coord(rng);
    e.push_back({xi, Complex{amp(rng), amp(rng)}});
  }
  return SparseSpectrum::from_entries(dim, std::move(e), 0.0);
}

/// ||a - b||_{FL^1} / ||b||_{FL^1}.
inline double rel_fl1(const SparseSpectrum& a, const SparseSpectrum& b) {
  return fl_norm(add_exact(a, b, -1.0), 1.0) / fl_norm(b, 1.0);
}

}  // namespace nls::test

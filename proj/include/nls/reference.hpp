#pragma once

// Serial, deliberately plain versions of the heavy kernels. They share no
// code with the optimized paths and serve as test oracles and benchmark
// baselines.

#include "nls/duhamel.hpp"
#include "nls/lattice.hpp"

namespace nls::reference {

/// Scatter into an ordered map, truncated like nls::convolve.
SparseSpectrum convolve(const SparseSpectrum& f, const SparseSpectrum& g);

/// Direct triple loop over the three supports.
SparseSpectrum trilinear_product(const SparseSpectrum& f1, const SparseSpectrum& f2,
                                 const SparseSpectrum& f3);

/// Direct triple loop with the xi = xi1 and xi = xi3 exclusions spelled out.
SparseSpectrum wick_trilinear_product(const SparseSpectrum& f1, const SparseSpectrum& f2,
                                      const SparseSpectrum& f3);

/// Triple loop with (1 - exp(-i t omega)) / (i omega) evaluated literally.
SparseSpectrum xi1_exact(const SparseSpectrum& phi, double t,
                         Nonlinearity nl = Nonlinearity::cubic);

}  // namespace nls::reference

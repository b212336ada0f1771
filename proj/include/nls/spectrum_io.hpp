#pragma once

// Plain-text spectrum files: a "# d=<d>" header followed by one line per
// support point, "xi_1 ... xi_d re im".

#include <iosfwd>
#include <string>

#include "nls/lattice.hpp"

namespace nls {

void write_spectrum(std::ostream& os, const SparseSpectrum& f);
SparseSpectrum read_spectrum(std::istream& is);

void save_spectrum(const std::string& path, const SparseSpectrum& f);
SparseSpectrum load_spectrum(const std::string& path);

}  // namespace nls

#include "nls/spectrum_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace nls {

void write_spectrum(std::ostream& os, const SparseSpectrum& f) {
  os << "# d=" << f.dim() << '\n';
  char buf[64];
  for (const auto& e : f) {
    for (int k = 0; k < f.dim(); ++k) os << e.xi[k] << ' ';
    std::snprintf(buf, sizeof buf, "%.17g %.17g", e.value.real(), e.value.imag());
    os << buf << '\n';
  }
}

SparseSpectrum read_spectrum(std::istream& is) {
  std::string line;
  int dim = 0;
  while (std::getline(is, line)) {
    if (line.rfind("# d=", 0) == 0) {
      dim = std::stoi(line.substr(4));
      break;
    }
    if (!line.empty() && line[0] != '#') break;
  }
  if (dim < 1 || dim > kMaxDim) throw std::runtime_error("spectrum file: missing or bad '# d=' header");

  std::vector<SparseSpectrum::Entry> entries;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    LatticePoint xi(dim);
    double re = 0, im = 0;
    for (int k = 0; k < dim; ++k) ls >> xi[k];
    ls >> re >> im;
    if (!ls) throw std::runtime_error("spectrum file: malformed line " + std::to_string(lineno));
    entries.push_back({xi, {re, im}});
  }
  return SparseSpectrum::from_entries(dim, std::move(entries), 0.0);
}

void save_spectrum(const std::string& path, const SparseSpectrum& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_spectrum(os, f);
}

SparseSpectrum load_spectrum(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_spectrum(is);
}

}  // namespace nls

#include "nls/reference.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "nls/errors.hpp"

namespace nls::reference {

namespace {

using Accumulator = std::map<LatticePoint, Complex>;

SparseSpectrum collect(int dim, const Accumulator& acc, double threshold) {
  std::vector<SparseSpectrum::Entry> entries;
  entries.reserve(acc.size());
  for (const auto& [xi, v] : acc) entries.push_back({xi, v});
  return SparseSpectrum::from_entries(dim, std::move(entries), threshold);
}

void check_dims(const SparseSpectrum& a, const SparseSpectrum& b, const SparseSpectrum& c) {
  if (a.dim() != b.dim() || b.dim() != c.dim()) {
    throw std::invalid_argument("trilinear product: dimension mismatch");
  }
}

}  // namespace

SparseSpectrum convolve(const SparseSpectrum& f, const SparseSpectrum& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("convolve: dimension mismatch");
  Accumulator acc;
  for (const auto& a : f) {
    for (const auto& b : g) acc[a.xi + b.xi] += a.value * b.value;
  }
  return collect(f.dim(), acc, kTruncation);
}

SparseSpectrum trilinear_product(const SparseSpectrum& f1, const SparseSpectrum& f2,
                                 const SparseSpectrum& f3) {
  check_dims(f1, f2, f3);
  Accumulator acc;
  for (const auto& a : f1) {
    for (const auto& b : f2) {
      for (const auto& c : f3) {
        acc[a.xi - b.xi + c.xi] += a.value * std::conj(b.value) * c.value;
      }
    }
  }
  return collect(f1.dim(), acc, kTruncation);
}

SparseSpectrum wick_trilinear_product(const SparseSpectrum& f1, const SparseSpectrum& f2,
                                      const SparseSpectrum& f3) {
  check_dims(f1, f2, f3);
  Accumulator acc;
  for (const auto& a : f1) {
    for (const auto& b : f2) {
      for (const auto& c : f3) {
        const LatticePoint xi = a.xi - b.xi + c.xi;
        if (xi == a.xi || xi == c.xi) continue;
        acc[xi] += a.value * std::conj(b.value) * c.value;
      }
    }
  }
  for (const auto& a : f1) {
    acc[a.xi] -= a.value * std::conj(f2(a.xi)) * f3(a.xi);
  }
  return collect(f1.dim(), acc, kTruncation);
}

SparseSpectrum xi1_exact(const SparseSpectrum& phi, double t, Nonlinearity nl) {
  if (t < 0) throw DomainError("xi1_exact: negative time");
  Accumulator acc;
  const Complex I{0.0, 1.0};
  for (const auto& a : phi) {
    for (const auto& b : phi) {
      for (const auto& c : phi) {
        const LatticePoint xi = a.xi - b.xi + c.xi;
        if (nl == Nonlinearity::wick && (xi == a.xi || xi == c.xi)) continue;
        const double omega = static_cast<double>(xi.norm_squared() - a.xi.norm_squared() +
                                                  b.xi.norm_squared() - c.xi.norm_squared());
        const Complex k = omega == 0.0 ? Complex{t} : (1.0 - std::exp(-I * t * omega)) / (I * omega);
        acc[xi] += k * a.value * std::conj(b.value) * c.value;
      }
    }
  }
  if (nl == Nonlinearity::wick) {
    for (const auto& a : phi) acc[a.xi] -= t * std::norm(a.value) * a.value;
  }
  for (auto& [xi, v] : acc) v *= I * std::exp(I * t * static_cast<double>(xi.norm_squared()));
  return collect(phi.dim(), acc, 0.0);
}

}  // namespace nls::reference

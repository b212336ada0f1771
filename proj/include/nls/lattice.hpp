#pragma once

// Fourier-side representation of functions on the d-torus: integer frequency
// lattice points, sparse coefficient maps, Fourier-Lebesgue and Sobolev norms,
// spectral convolution and the free Schroedinger flow.

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

namespace nls {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 3;

/// Entries with modulus below this are dropped after every convolution.
inline constexpr double kTruncation = 1e-14;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class LatticePoint {
 public:
  LatticePoint() = default;
  /// Origin of Z^dim.
  explicit LatticePoint(int dim);
  LatticePoint(std::initializer_list<std::int64_t> coords);

  /// value * e_axis in Z^dim.
  static LatticePoint along_axis(int dim, int axis, std::int64_t value);

  int dim() const { return dim_; }
  std::int64_t operator[](int k) const { return c_[k]; }
  std::int64_t& operator[](int k) { return c_[k]; }

  std::int64_t norm_squared() const;
  std::int64_t dot(const LatticePoint& other) const;
  std::int64_t max_abs() const;

  LatticePoint operator+(const LatticePoint& o) const;
  LatticePoint operator-(const LatticePoint& o) const;
  LatticePoint operator-() const;

  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;

 private:
  // Coordinates first so the defaulted ordering is lexicographic.
  std::array<std::int64_t, kMaxDim> c_{};
  int dim_ = 1;
};

/// Finite map Z^d -> C, stored sorted by frequency. Every stored amplitude
/// has modulus >= the truncation threshold it was built with.
class SparseSpectrum {
 public:
  struct Entry {
    LatticePoint xi;
    Complex value;
  };

  SparseSpectrum() = default;
  explicit SparseSpectrum(int dim);

  /// Sorts, sums duplicate frequencies and drops entries below `threshold`.
  static SparseSpectrum from_entries(int dim, std::vector<Entry> entries,
                                     double threshold = kTruncation);
  /// Same as from_entries but the caller guarantees sorted unique keys.
  static SparseSpectrum from_sorted(int dim, std::vector<Entry> entries);

  static SparseSpectrum delta(const LatticePoint& xi, Complex amplitude = 1.0);

  int dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  /// Amplitude at xi, zero when xi is outside the support.
  Complex operator()(const LatticePoint& xi) const;
  bool contains(const LatticePoint& xi) const;

 private:
  int dim_ = 1;
  std::vector<Entry> entries_;
};

struct NormSpec {
  enum class Kind { fourier_lebesgue, sobolev, l2 };
  Kind kind = Kind::l2;
  double parameter = 2.0;

  static NormSpec fourier_lebesgue(double p) { return {Kind::fourier_lebesgue, p}; }
  static NormSpec sobolev(double s) { return {Kind::sobolev, s}; }
  static NormSpec l2() { return {Kind::l2, 2.0}; }
};

/// (sum |f(xi)|^p)^(1/p), or the sup for p = infinity. Throws DomainError
/// for p < 1.
double fl_norm(const SparseSpectrum& f, double p);

/// (sum <xi>^{2s} |f(xi)|^2)^(1/2) with <xi> = (1 + |xi|^2)^(1/2).
double sobolev_norm(const SparseSpectrum& f, double s);

double l2_norm(const SparseSpectrum& f);

double norm(const SparseSpectrum& f, const NormSpec& spec);

/// Japanese bracket <xi>^{2s} = (1 + |xi|^2)^s.
double bracket_weight(const LatticePoint& xi, double s);

/// (f * g)(xi) = sum_eta f(eta) g(xi - eta).
SparseSpectrum convolve(const SparseSpectrum& f, const SparseSpectrum& g);

/// Fourier side of conj(u): xi -> conj(f(-xi)).
SparseSpectrum reflect_conj(const SparseSpectrum& f);

/// Constant `amplitude` on center + ([-A/2, A/2)^d cap Z^d).
SparseSpectrum cube_indicator(const LatticePoint& center, std::int64_t side,
                              Complex amplitude = 1.0);

/// Free Schroedinger flow S(t): multiplies each mode by exp(i t |xi|^2).
SparseSpectrum propagate(const SparseSpectrum& f, double t);

SparseSpectrum operator+(const SparseSpectrum& f, const SparseSpectrum& g);
SparseSpectrum operator-(const SparseSpectrum& f, const SparseSpectrum& g);
SparseSpectrum operator*(Complex c, const SparseSpectrum& f);

/// Exact pointwise sum without truncation.
SparseSpectrum add_exact(const SparseSpectrum& f, const SparseSpectrum& g,
                         Complex g_scale = 1.0);

/// sum conj(f(xi)) g(xi)
Complex inner_product(const SparseSpectrum& f, const SparseSpectrum& g);

/// Largest |xi|_inf over the support, 0 for the empty spectrum.
std::int64_t support_radius(const SparseSpectrum& f);

}  // namespace nls

#include "nls/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "nls/dense_box.hpp"
#include "nls/errors.hpp"
#include "nls/reference.hpp"
#include "nls/summation.hpp"

namespace nls {

namespace {

void require_same_dim(const SparseSpectrum& f, const SparseSpectrum& g, const char* op) {
  if (f.dim() != g.dim()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(f.dim()) + " vs " + std::to_string(g.dim()) +
                                ")");
  }
}

void require_valid_dim(int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw std::invalid_argument("lattice dimension must be in [1, 3], got " +
                                std::to_string(dim));
  }
}

// Beyond this many output cells the dense scratch box is not worth it and the
// hashed reference path is used instead.
constexpr std::size_t kDenseVolumeCap = std::size_t{1} << 26;

// Zero runs shorter than this inside a row are absorbed into one segment.
constexpr std::int64_t kSegmentGap = 8;

// Contiguous run along the last axis of one operand, stored densely.
struct Segment {
  std::int64_t offset;  // row-major offset in the output box
  std::int64_t length;
  std::size_t data;     // start in the flat value buffers
};

struct SegmentedOperand {
  std::vector<Segment> segments;
  std::vector<double> re;
  std::vector<double> im;
  std::size_t cells = 0;
};

SegmentedOperand segment_rows(const SparseSpectrum& f, const LatticeBox& box,
                              const std::array<std::int64_t, kMaxDim>& out_strides) {
  SegmentedOperand out;
  const int last = f.dim() - 1;
  const auto& e = f.entries();
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i + 1;
    while (j < e.size()) {
      bool same_row = true;
      for (int k = 0; k < last; ++k) {
        if (e[j].xi[k] != e[j - 1].xi[k]) {
          same_row = false;
          break;
        }
      }
      if (!same_row || e[j].xi[last] - e[j - 1].xi[last] > kSegmentGap) break;
      ++j;
    }
    const std::int64_t first = e[i].xi[last];
    const std::int64_t length = e[j - 1].xi[last] - first + 1;
    Segment seg{box.offset(e[i].xi, out_strides), length, out.re.size()};
    out.re.resize(out.re.size() + static_cast<std::size_t>(length), 0.0);
    out.im.resize(out.im.size() + static_cast<std::size_t>(length), 0.0);
    for (std::size_t k = i; k < j; ++k) {
      const std::size_t pos = seg.data + static_cast<std::size_t>(e[k].xi[last] - first);
      out.re[pos] = e[k].value.real();
      out.im[pos] = e[k].value.imag();
    }
    out.cells += static_cast<std::size_t>(length);
    out.segments.push_back(seg);
    i = j;
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// LatticePoint

LatticePoint::LatticePoint(int dim) : dim_(dim) { require_valid_dim(dim); }

LatticePoint::LatticePoint(std::initializer_list<std::int64_t> coords)
    : dim_(static_cast<int>(coords.size())) {
  require_valid_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

LatticePoint LatticePoint::along_axis(int dim, int axis, std::int64_t value) {
  LatticePoint p(dim);
  p[axis] = value;
  return p;
}

std::int64_t LatticePoint::norm_squared() const { return dot(*this); }

std::int64_t LatticePoint::dot(const LatticePoint& other) const {
  std::int64_t acc = 0;
  for (int k = 0; k < dim_; ++k) acc += c_[k] * other.c_[k];
  return acc;
}

std::int64_t LatticePoint::max_abs() const {
  std::int64_t m = 0;
  for (int k = 0; k < dim_; ++k) m = std::max<std::int64_t>(m, std::abs(c_[k]));
  return m;
}

LatticePoint LatticePoint::operator+(const LatticePoint& o) const {
  LatticePoint r(*this);
  for (int k = 0; k < dim_; ++k) r.c_[k] += o.c_[k];
  return r;
}

LatticePoint LatticePoint::operator-(const LatticePoint& o) const {
  LatticePoint r(*this);
  for (int k = 0; k < dim_; ++k) r.c_[k] -= o.c_[k];
  return r;
}

LatticePoint LatticePoint::operator-() const {
  LatticePoint r(*this);
  for (int k = 0; k < dim_; ++k) r.c_[k] = -r.c_[k];
  return r;
}

// ---------------------------------------------------------------------------
// LatticeBox

std::size_t LatticeBox::volume() const {
  std::size_t v = 1;
  for (int k = 0; k < dim; ++k) v *= static_cast<std::size_t>(extent[k]);
  return v;
}

std::array<std::int64_t, kMaxDim> LatticeBox::strides() const {
  std::array<std::int64_t, kMaxDim> s{0, 0, 0};
  std::int64_t acc = 1;
  for (int k = dim - 1; k >= 0; --k) {
    s[k] = acc;
    acc *= extent[k];
  }
  return s;
}

std::int64_t LatticeBox::offset(const LatticePoint& xi,
                                const std::array<std::int64_t, kMaxDim>& strides) const {
  std::int64_t off = 0;
  for (int k = 0; k < dim; ++k) off += (xi[k] - lo[k]) * strides[k];
  return off;
}

LatticePoint LatticeBox::point_at(std::size_t linear) const {
  LatticePoint p(dim);
  for (int k = dim - 1; k >= 0; --k) {
    const auto ext = static_cast<std::size_t>(extent[k]);
    p[k] = lo[k] + static_cast<std::int64_t>(linear % ext);
    linear /= ext;
  }
  return p;
}

bool LatticeBox::contains(const LatticePoint& xi) const {
  for (int k = 0; k < dim; ++k) {
    if (xi[k] < lo[k] || xi[k] >= lo[k] + extent[k]) return false;
  }
  return true;
}

LatticeBox bounding_box(const SparseSpectrum& f) {
  LatticeBox box;
  box.dim = f.dim();
  if (f.empty()) return box;
  std::array<std::int64_t, kMaxDim> hi{};
  for (int k = 0; k < f.dim(); ++k) {
    box.lo[k] = f.entries().front().xi[k];
    hi[k] = box.lo[k];
  }
  for (const auto& e : f) {
    for (int k = 0; k < f.dim(); ++k) {
      box.lo[k] = std::min(box.lo[k], e.xi[k]);
      hi[k] = std::max(hi[k], e.xi[k]);
    }
  }
  for (int k = 0; k < f.dim(); ++k) box.extent[k] = hi[k] - box.lo[k] + 1;
  return box;
}

LatticeBox minkowski_sum(const LatticeBox& x, const LatticeBox& y) {
  LatticeBox box;
  box.dim = x.dim;
  for (int k = 0; k < x.dim; ++k) {
    box.lo[k] = x.lo[k] + y.lo[k];
    box.extent[k] = x.extent[k] + y.extent[k] - 1;
  }
  return box;
}

// ---------------------------------------------------------------------------
// SparseSpectrum

SparseSpectrum::SparseSpectrum(int dim) : dim_(dim) { require_valid_dim(dim); }

SparseSpectrum SparseSpectrum::from_entries(int dim, std::vector<Entry> entries,
                                            double threshold) {
  require_valid_dim(dim);
  for (const auto& e : entries) {
    if (e.xi.dim() != dim) {
      throw std::invalid_argument("SparseSpectrum: key dimension " + std::to_string(e.xi.dim()) +
                                  " does not match spectrum dimension " + std::to_string(dim));
    }
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.xi < b.xi; });
  std::vector<Entry> merged;
  merged.reserve(entries.size());
  for (const auto& e : entries) {
    if (!merged.empty() && merged.back().xi == e.xi) {
      merged.back().value += e.value;
    } else {
      merged.push_back(e);
    }
  }
  std::erase_if(merged, [threshold](const Entry& e) {
    return std::abs(e.value) < threshold || e.value == Complex{};
  });
  SparseSpectrum out(dim);
  out.entries_ = std::move(merged);
  return out;
}

SparseSpectrum SparseSpectrum::from_sorted(int dim, std::vector<Entry> entries) {
  SparseSpectrum out(dim);
  out.entries_ = std::move(entries);
  return out;
}

SparseSpectrum SparseSpectrum::delta(const LatticePoint& xi, Complex amplitude) {
  return from_entries(xi.dim(), {{xi, amplitude}}, 0.0);
}

Complex SparseSpectrum::operator()(const LatticePoint& xi) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), xi,
                             [](const Entry& e, const LatticePoint& p) { return e.xi < p; });
  if (it != entries_.end() && it->xi == xi) return it->value;
  return {};
}

bool SparseSpectrum::contains(const LatticePoint& xi) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), xi,
                             [](const Entry& e, const LatticePoint& p) { return e.xi < p; });
  return it != entries_.end() && it->xi == xi;
}

// ---------------------------------------------------------------------------
// Norms

double bracket_weight(const LatticePoint& xi, double s) {
  return std::pow(1.0 + static_cast<double>(xi.norm_squared()), s);
}

double fl_norm(const SparseSpectrum& f, double p) {
  if (!(p >= 1.0)) throw DomainError("fl_norm: exponent p must be >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& e : f) m = std::max(m, std::abs(e.value));
    return m;
  }
  CompensatedSum acc;
  if (p == 1.0) {
    for (const auto& e : f) acc += std::abs(e.value);
    return acc.value();
  }
  if (p == 2.0) {
    for (const auto& e : f) acc += std::norm(e.value);
    return std::sqrt(acc.value());
  }
  for (const auto& e : f) acc += std::pow(std::abs(e.value), p);
  return std::pow(acc.value(), 1.0 / p);
}

double sobolev_norm(const SparseSpectrum& f, double s) {
  CompensatedSum acc;
  for (const auto& e : f) acc += bracket_weight(e.xi, s) * std::norm(e.value);
  return std::sqrt(acc.value());
}

double l2_norm(const SparseSpectrum& f) { return fl_norm(f, 2.0); }

double norm(const SparseSpectrum& f, const NormSpec& spec) {
  switch (spec.kind) {
    case NormSpec::Kind::fourier_lebesgue:
      return fl_norm(f, spec.parameter);
    case NormSpec::Kind::sobolev:
      return sobolev_norm(f, spec.parameter);
    case NormSpec::Kind::l2:
      return l2_norm(f);
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Convolution

SparseSpectrum convolve(const SparseSpectrum& f, const SparseSpectrum& g) {
  require_same_dim(f, g, "convolve");
  const int dim = f.dim();
  if (f.empty() || g.empty()) return SparseSpectrum(dim);

  const LatticeBox fbox = bounding_box(f);
  const LatticeBox gbox = bounding_box(g);
  const LatticeBox obox = minkowski_sum(fbox, gbox);
  if (obox.volume() > kDenseVolumeCap) return reference::convolve(f, g);
  const auto strides = obox.strides();

  // One operand is walked entry by entry, the other as dense row segments;
  // pick the pairing with less work.
  SegmentedOperand fseg = segment_rows(f, fbox, strides);
  SegmentedOperand gseg = segment_rows(g, gbox, strides);
  const bool segment_g = f.size() * gseg.cells <= g.size() * fseg.cells;
  const SparseSpectrum& walked = segment_g ? f : g;
  const LatticeBox& wbox = segment_g ? fbox : gbox;
  const SegmentedOperand& rows = segment_g ? gseg : fseg;

  std::vector<std::int64_t> woff(walked.size());
  for (std::size_t i = 0; i < walked.size(); ++i) {
    woff[i] = wbox.offset(walked.entries()[i].xi, strides);
  }

  const auto volume = static_cast<std::int64_t>(obox.volume());
  std::vector<double> out_re(obox.volume(), 0.0);
  std::vector<double> out_im(obox.volume(), 0.0);
  const auto& we = walked.entries();

  // Each thread owns a contiguous slice of the output; every output cell
  // accumulates in (walked entry, segment) order whatever the thread count.
#pragma omp parallel
  {
    const std::int64_t nthreads = omp_get_num_threads();
    const std::int64_t tid = omp_get_thread_num();
    const std::int64_t r0 = volume * tid / nthreads;
    const std::int64_t r1 = volume * (tid + 1) / nthreads;
    double* ore = out_re.data();
    double* oim = out_im.data();
    for (std::size_t i = 0; i < we.size(); ++i) {
      const double ar = we[i].value.real();
      const double ai = we[i].value.imag();
      for (const Segment& s : rows.segments) {
        const std::int64_t start = woff[i] + s.offset;
        const std::int64_t lo = std::max(start, r0);
        const std::int64_t hi = std::min(start + s.length, r1);
        if (lo >= hi) continue;
        const double* sre = rows.re.data() + s.data + (lo - start);
        const double* sim = rows.im.data() + s.data + (lo - start);
        double* pre = ore + lo;
        double* pim = oim + lo;
        const std::int64_t n = hi - lo;
#pragma omp simd
        for (std::int64_t k = 0; k < n; ++k) {
          pre[k] += ar * sre[k] - ai * sim[k];
          pim[k] += ar * sim[k] + ai * sre[k];
        }
      }
    }
  }

  std::vector<SparseSpectrum::Entry> entries;
  for (std::size_t idx = 0; idx < obox.volume(); ++idx) {
    const Complex v{out_re[idx], out_im[idx]};
    if (v == Complex{} || std::abs(v) < kTruncation) continue;
    entries.push_back({obox.point_at(idx), v});
  }
  return SparseSpectrum::from_sorted(dim, std::move(entries));
}

SparseSpectrum reflect_conj(const SparseSpectrum& f) {
  std::vector<SparseSpectrum::Entry> entries;
  entries.reserve(f.size());
  for (auto it = f.entries().rbegin(); it != f.entries().rend(); ++it) {
    entries.push_back({-it->xi, std::conj(it->value)});
  }
  return SparseSpectrum::from_sorted(f.dim(), std::move(entries));
}

SparseSpectrum cube_indicator(const LatticePoint& center, std::int64_t side, Complex amplitude) {
  if (side <= 0) throw DomainError("cube_indicator: side A must be positive");
  const int dim = center.dim();
  const std::int64_t lo = -(side / 2);
  const std::int64_t hi = (side + 1) / 2;  // exclusive
  std::vector<SparseSpectrum::Entry> entries;
  LatticePoint offset(dim);
  for (int k = 0; k < dim; ++k) offset[k] = lo;
  // Odometer over [lo, hi)^dim, emitted in lexicographic order.
  while (true) {
    entries.push_back({center + offset, amplitude});
    int k = dim - 1;
    while (k >= 0) {
      if (++offset[k] < hi) break;
      offset[k] = lo;
      --k;
    }
    if (k < 0) break;
  }
  if (amplitude == Complex{}) entries.clear();
  return SparseSpectrum::from_sorted(dim, std::move(entries));
}

SparseSpectrum propagate(const SparseSpectrum& f, double t) {
  if (t == 0.0) return f;
  std::vector<SparseSpectrum::Entry> entries(f.entries());
  for (auto& e : entries) {
    e.value *= std::polar(1.0, t * static_cast<double>(e.xi.norm_squared()));
  }
  return SparseSpectrum::from_sorted(f.dim(), std::move(entries));
}

// ---------------------------------------------------------------------------
// Pointwise arithmetic

SparseSpectrum add_exact(const SparseSpectrum& f, const SparseSpectrum& g, Complex g_scale) {
  require_same_dim(f, g, "add");
  std::vector<SparseSpectrum::Entry> out;
  out.reserve(f.size() + g.size());
  auto a = f.begin();
  auto b = g.begin();
  auto push = [&out](const LatticePoint& xi, Complex v) {
    if (v != Complex{}) out.push_back({xi, v});
  };
  while (a != f.end() || b != g.end()) {
    if (b == g.end() || (a != f.end() && a->xi < b->xi)) {
      push(a->xi, a->value);
      ++a;
    } else if (a == f.end() || b->xi < a->xi) {
      push(b->xi, g_scale * b->value);
      ++b;
    } else {
      push(a->xi, a->value + g_scale * b->value);
      ++a;
      ++b;
    }
  }
  return SparseSpectrum::from_sorted(f.dim(), std::move(out));
}

SparseSpectrum operator+(const SparseSpectrum& f, const SparseSpectrum& g) {
  return add_exact(f, g, 1.0);
}

SparseSpectrum operator-(const SparseSpectrum& f, const SparseSpectrum& g) {
  return add_exact(f, g, -1.0);
}

SparseSpectrum operator*(Complex c, const SparseSpectrum& f) {
  if (c == Complex{}) return SparseSpectrum(f.dim());
  std::vector<SparseSpectrum::Entry> entries(f.entries());
  for (auto& e : entries) e.value *= c;
  return SparseSpectrum::from_sorted(f.dim(), std::move(entries));
}

Complex inner_product(const SparseSpectrum& f, const SparseSpectrum& g) {
  require_same_dim(f, g, "inner_product");
  CompensatedComplexSum acc;
  auto a = f.begin();
  auto b = g.begin();
  while (a != f.end() && b != g.end()) {
    if (a->xi < b->xi) {
      ++a;
    } else if (b->xi < a->xi) {
      ++b;
    } else {
      acc += std::conj(a->value) * b->value;
      ++a;
      ++b;
    }
  }
  return acc.value();
}

std::int64_t support_radius(const SparseSpectrum& f) {
  std::int64_t r = 0;
  for (const auto& e : f) r = std::max(r, e.xi.max_abs());
  return r;
}

}  // namespace nls

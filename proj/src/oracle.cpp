#include "nls/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "nls/errors.hpp"

namespace nls {

namespace {

// fftw_complex is layout-compatible with std::complex<double>.
class DenseGrid {
 public:
  DenseGrid(int dim, int K) : dim_(dim), K_(K), L_(2 * K + 1) {
    size_ = 1;
    for (int k = 0; k < dim; ++k) size_ *= static_cast<std::size_t>(L_);
    data_ = reinterpret_cast<Complex*>(fftw_malloc(sizeof(Complex) * size_));
    if (!data_) throw std::bad_alloc();
    int n[kMaxDim] = {L_, L_, L_};
    auto* raw = reinterpret_cast<fftw_complex*>(data_);
#pragma omp critical(nls_fftw_planner)
    {
      forward_ = fftw_plan_dft(dim, n, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft(dim, n, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    std::fill(data_, data_ + size_, Complex{});

    // Frequency attached to each storage index, and |xi|^2 / |xi|_inf.
    norm2_.resize(size_);
    top_.resize(size_);
    const double cut = 2.0 * K / 3.0;
    for (std::size_t i = 0; i < size_; ++i) {
      std::size_t r = i;
      std::int64_t n2 = 0, inf = 0;
      for (int k = dim - 1; k >= 0; --k) {
        auto idx = static_cast<std::int64_t>(r % static_cast<std::size_t>(L_));
        r /= static_cast<std::size_t>(L_);
        const std::int64_t xi = idx <= K ? idx : idx - L_;
        n2 += xi * xi;
        inf = std::max<std::int64_t>(inf, std::abs(xi));
      }
      norm2_[i] = static_cast<double>(n2);
      top_[i] = static_cast<double>(inf) > cut;
    }
  }
  ~DenseGrid() {
#pragma omp critical(nls_fftw_planner)
    {
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(backward_);
    }
    fftw_free(data_);
  }
  DenseGrid(const DenseGrid&) = delete;
  DenseGrid& operator=(const DenseGrid&) = delete;

  std::size_t size() const { return size_; }
  Complex* data() { return data_; }
  double norm2(std::size_t i) const { return norm2_[i]; }
  bool top(std::size_t i) const { return top_[i]; }

  std::size_t index_of(const LatticePoint& xi) const {
    std::size_t idx = 0;
    for (int k = 0; k < dim_; ++k) {
      const std::int64_t w = ((xi[k] % L_) + L_) % L_;
      idx = idx * static_cast<std::size_t>(L_) + static_cast<std::size_t>(w);
    }
    return idx;
  }

  LatticePoint point_of(std::size_t i) const {
    LatticePoint p(dim_);
    for (int k = dim_ - 1; k >= 0; --k) {
      const auto idx = static_cast<std::int64_t>(i % static_cast<std::size_t>(L_));
      i /= static_cast<std::size_t>(L_);
      p[k] = idx <= K_ ? idx : idx - L_;
    }
    return p;
  }

  void to_physical() { fftw_execute(backward_); }
  void to_fourier() {
    fftw_execute(forward_);
    const double scale = 1.0 / static_cast<double>(size_);
    for (std::size_t i = 0; i < size_; ++i) data_[i] *= scale;
  }

 private:
  int dim_;
  int K_;
  int L_;
  std::size_t size_ = 0;
  Complex* data_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  std::vector<double> norm2_;
  std::vector<bool> top_;
};

void aliasing_guard(DenseGrid& g, int K) {
  double total = 0.0, top = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double e = std::norm(g.data()[i]);
    total += e;
    if (g.top(i)) top += e;
  }
  if (total > 0.0 && top > kAliasingTolerance * total) {
    throw NumericalGuard("evolve: " + std::to_string(top / total) +
                         " of the mass sits in the upper third of the modes; increase K (now " +
                         std::to_string(K) + ")");
  }
}

}  // namespace

SparseSpectrum evolve(const SparseSpectrum& u0, double t, const StepperConfig& cfg, int K) {
  if (!(t >= 0.0)) throw DomainError("evolve: t must be >= 0");
  if (K < 1) throw std::invalid_argument("evolve: cutoff K must be >= 1");
  if (cfg.dt < 0.0) throw std::invalid_argument("evolve: dt must be positive");
  if (support_radius(u0) > K) {
    throw DomainError("evolve: initial data reaches |xi| = " + std::to_string(support_radius(u0)) +
                      " beyond the cutoff K = " + std::to_string(K));
  }
  const int dim = u0.dim();
  if (u0.empty() || t == 0.0) return u0;

  const double dt_target = cfg.dt > 0.0 ? cfg.dt : t / 2048.0;
  const auto steps = static_cast<long>(std::ceil(t / dt_target - 1e-9));
  const double dt = t / static_cast<double>(steps);

  DenseGrid g(dim, K);
  Complex* u = g.data();
  for (const auto& e : u0) u[g.index_of(e.xi)] = e.value;
  aliasing_guard(g, K);

  const std::size_t n = g.size();
  std::vector<Complex> half(n), full(n);
  for (std::size_t i = 0; i < n; ++i) {
    half[i] = std::polar(1.0, 0.5 * dt * g.norm2(i));
    full[i] = std::polar(1.0, dt * g.norm2(i));
  }
  // Wick ordering shifts the potential by the conserved mass sum |u^(xi)|^2.
  double shift = 0.0;
  if (cfg.wick) {
    for (std::size_t i = 0; i < n; ++i) shift += std::norm(u[i]);
    shift *= 2.0;
  }

  // Strang: L(dt/2) [N(dt) L(dt)]^{steps-1} N(dt) L(dt/2).
  for (std::size_t i = 0; i < n; ++i) u[i] *= half[i];
  for (long step = 0; step < steps; ++step) {
    g.to_physical();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
      u[i] *= std::polar(1.0, (std::norm(u[i]) - shift) * dt);
    }
    g.to_fourier();
    const auto& phase = step + 1 < steps ? full : half;
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) u[i] *= phase[i];
    if ((step & 63) == 63) aliasing_guard(g, K);
  }
  aliasing_guard(g, K);

  std::vector<SparseSpectrum::Entry> entries;
  entries.reserve(n);
  for (std::size_t i = 0; i < n; ++i) entries.push_back({g.point_of(i), u[i]});
  return SparseSpectrum::from_entries(dim, std::move(entries), 0.0);
}

SparseSpectrum picard_solve(const SparseSpectrum& u0, double t, int J, const QuadratureSpec& q,
                            Nonlinearity nl) {
  if (J < 0) throw std::invalid_argument("picard_solve: J must be >= 0");
  if (!(t >= 0.0)) throw DomainError("picard_solve: t must be >= 0");
  q.validate();
  if (!(t < lwp_radius(u0))) {
    throw DomainError("picard_solve: t lies outside the contraction radius");
  }
  std::vector<SparseSpectrum> linear;
  linear.reserve(static_cast<std::size_t>(q.nodes) + 1);
  for (int m = 0; m <= q.nodes; ++m) linear.push_back(propagate(u0, q.time(t, m)));
  if (J == 0 || t == 0.0) return linear.back();

  std::vector<SparseSpectrum> P = linear;
  double last_increment = kInfinity;
  for (int j = 1; j <= J; ++j) {
    const auto D = duhamel_on_grid(P, P, P, t, nl);
    std::vector<SparseSpectrum> next(P.size());
    for (std::size_t m = 0; m < P.size(); ++m) next[m] = add_exact(linear[m], D[m]);
    const double increment = fl_norm(next.back() - P.back(), 1.0);
    if (increment > last_increment) {
      throw NumericalGuard("picard_solve: FL^1 increment grew from " +
                           std::to_string(last_increment) + " to " + std::to_string(increment) +
                           " at iteration " + std::to_string(j));
    }
    last_increment = increment;
    P = std::move(next);
  }
  return P.back();
}

}  // namespace nls

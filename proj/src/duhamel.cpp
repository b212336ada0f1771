#include "nls/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "nls/dense_box.hpp"
#include "nls/errors.hpp"
#include "nls/reference.hpp"

namespace nls {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr std::size_t kXi1DenseCap = std::size_t{1} << 26;

void require_time(double t, const char* who) {
  if (!(t >= 0.0)) throw DomainError(std::string(who) + ": t must be >= 0");
}

void require_grid(const std::vector<SparseSpectrum>& u, std::size_t n, const char* who) {
  if (u.size() != n) {
    throw std::invalid_argument(std::string(who) + ": children sampled on different grids");
  }
}

}  // namespace

void QuadratureSpec::validate() const {
  if (nodes < 2) throw std::invalid_argument("quadrature needs at least 2 nodes");
}

ResonancePhase ResonancePhase::of(const LatticePoint& xi1, const LatticePoint& xi2,
                                  const LatticePoint& xi3) {
  ResonancePhase r{xi1 - xi2 + xi3, xi1, xi2, xi3, 0.0};
  r.omega = static_cast<double>(r.xi.norm_squared() - xi1.norm_squared() + xi2.norm_squared() -
                                xi3.norm_squared());
  return r;
}

std::int64_t resonance(const LatticePoint& xi1, const LatticePoint& xi2,
                       const LatticePoint& xi3) {
  return 2 * (xi1 - xi2).dot(xi3 - xi2);
}

Complex resonance_kernel(double omega, double t) {
  if (std::abs(omega) < 1e-12) return t;
  const double th = t * omega;
  if (std::abs(th) < 1e-3) {
    // (1 - e^{-i th}) / (i th) = sum_n (-i th)^n / (n+1)!
    const double th2 = th * th;
    const double re = 1.0 - th2 / 6.0 + th2 * th2 / 120.0;
    const double im = -th / 2.0 + th * th2 / 24.0 - th * th2 * th2 / 720.0;
    return t * Complex{re, im};
  }
  const double s = std::sin(0.5 * th);
  const double c = std::cos(0.5 * th);
  return 2.0 * s * Complex{c, -s} / omega;
}

SparseSpectrum trilinear_product(const SparseSpectrum& f1, const SparseSpectrum& f2,
                                 const SparseSpectrum& f3) {
  if (f1.dim() != f2.dim() || f2.dim() != f3.dim()) {
    throw std::invalid_argument("trilinear_product: dimension mismatch");
  }
  return convolve(convolve(f1, reflect_conj(f2)), f3);
}

SparseSpectrum wick_trilinear_product(const SparseSpectrum& f1, const SparseSpectrum& f2,
                                      const SparseSpectrum& f3) {
  // Removing xi = xi1 (so xi3 = xi2) and xi = xi3 (so xi1 = xi2) from the
  // full sum subtracts f1 <f2,f3> and f3 <f2,f1>; the doubly removed diagonal
  // cancels the explicit diagonal term.
  const SparseSpectrum full = trilinear_product(f1, f2, f3);
  const SparseSpectrum partial = add_exact(full, f1, -inner_product(f2, f3));
  return add_exact(partial, f3, -inner_product(f2, f1));
}

SparseSpectrum nonlinear_product(Nonlinearity nl, const SparseSpectrum& f1,
                                 const SparseSpectrum& f2, const SparseSpectrum& f3) {
  return nl == Nonlinearity::wick ? wick_trilinear_product(f1, f2, f3)
                                  : trilinear_product(f1, f2, f3);
}

std::vector<SparseSpectrum> duhamel_on_grid(const std::vector<SparseSpectrum>& u1,
                                            const std::vector<SparseSpectrum>& u2,
                                            const std::vector<SparseSpectrum>& u3, double t,
                                            Nonlinearity nl) {
  require_time(t, "duhamel");
  const std::size_t n = u1.size();
  if (n < 3) throw std::invalid_argument("duhamel: need at least 2 subintervals");
  require_grid(u2, n, "duhamel");
  require_grid(u3, n, "duhamel");
  const int dim = u1.front().dim();
  const int M = static_cast<int>(n) - 1;
  const double h = t / M;

  // Interaction-picture integrand G(t_m) = S(-t_m) N(u(t_m)).
  std::vector<SparseSpectrum> g(n, SparseSpectrum(dim));
#pragma omp parallel for schedule(dynamic)
  for (int m = 0; m < M + 1; ++m) {
    g[m] = propagate(nonlinear_product(nl, u1[m], u2[m], u3[m]), -h * m);
  }

  std::vector<SparseSpectrum> out(n, SparseSpectrum(dim));
  SparseSpectrum w(dim);
  const Complex half_step = kI * (0.5 * h);
  for (int m = 1; m <= M; ++m) {
    w = add_exact(w, add_exact(g[m - 1], g[m]), half_step);
    out[m] = propagate(w, h * m);
  }
  return out;
}

SparseSpectrum duhamel_integral(const Evaluator& u1, const Evaluator& u2, const Evaluator& u3,
                                double t, const QuadratureSpec& q, Nonlinearity nl) {
  require_time(t, "duhamel_integral");
  q.validate();
  std::vector<SparseSpectrum> a, b, c;
  for (int m = 0; m <= q.nodes; ++m) {
    const double tm = q.time(t, m);
    a.push_back(u1(tm));
    b.push_back(u2(tm));
    c.push_back(u3(tm));
  }
  if (t == 0.0) return SparseSpectrum(a.front().dim());
  return duhamel_on_grid(a, b, c, t, nl).back();
}

SparseSpectrum xi1_exact(const SparseSpectrum& phi, double t, Nonlinearity nl, Xi1Stats* stats) {
  return xi1_exact_doubling(phi, t, 1, nl, stats).front();
}

std::vector<SparseSpectrum> xi1_exact_doubling(const SparseSpectrum& phi, double t0, int count,
                                               Nonlinearity nl, Xi1Stats* stats) {
  require_time(t0, "xi1_exact");
  if (count < 1) throw std::invalid_argument("xi1_exact: need at least one time");
  const int dim = phi.dim();
  if (stats) *stats = Xi1Stats{};
  const auto nt = static_cast<std::size_t>(count);
  std::vector<double> times(nt);
  for (std::size_t k = 0; k < nt; ++k) times[k] = std::ldexp(t0, static_cast<int>(k));
  if (phi.empty() || t0 == 0.0) return std::vector<SparseSpectrum>(nt, SparseSpectrum(dim));

  const LatticeBox pbox = bounding_box(phi);
  LatticeBox rbox = pbox;  // box of -supp
  for (int k = 0; k < dim; ++k) rbox.lo[k] = -(pbox.lo[k] + pbox.extent[k] - 1);
  const LatticeBox obox = minkowski_sum(minkowski_sum(pbox, rbox), pbox);
  if (obox.volume() * nt > kXi1DenseCap) {
    std::vector<SparseSpectrum> out;
    for (double t : times) out.push_back(reference::xi1_exact(phi, t, nl));
    return out;
  }

  const auto strides = obox.strides();
  const auto& e = phi.entries();
  const std::size_t n = e.size();
  // Linear offsets are additive: off(xi1 - xi2 + xi3) = p[i1] - p[i2] + p[i3] + base.
  std::vector<std::int64_t> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t o = 0;
    for (int k = 0; k < dim; ++k) o += e[i].xi[k] * strides[k];
    p[i] = o;
  }
  std::int64_t base = 0;
  for (int k = 0; k < dim; ++k) base -= obox.lo[k] * strides[k];

  const std::size_t volume = obox.volume();
  const int max_threads = omp_get_max_threads();
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(max_threads));
  std::vector<Xi1Stats> tstats(static_cast<std::size_t>(max_threads));
  int team = 1;
  const bool wick = nl == Nonlinearity::wick;
  std::vector<double> vre(n), vim(n);
  for (std::size_t i = 0; i < n; ++i) {
    vre[i] = e[i].value.real();
    vim[i] = e[i].value.imag();
  }
  const double tmax = times.back();
  // Runs of consecutive last coordinates; along a run omega moves in steps of
  // 2 a_last, so the phase advances by a fixed rotation instead of a sincos.
  std::vector<char> run_start(n, 1);
  const int last = dim - 1;
  std::vector<std::vector<double>> coord(static_cast<std::size_t>(dim), std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < dim; ++k) coord[k][i] = static_cast<double>(e[i].xi[k]);
  }
  for (std::size_t i = 1; i < n; ++i) {
    bool same = e[i].xi[last] == e[i - 1].xi[last] + 1;
    for (int k = 0; k < last && same; ++k) same = e[i].xi[k] == e[i - 1].xi[k];
    run_start[i] = same ? 0 : 1;
  }

#pragma omp parallel num_threads(max_threads)
  {
    const int tid = omp_get_thread_num();
#pragma omp single
    team = omp_get_num_threads();
    // Layout: [cell][time][re, im].
    auto& acc = partial[static_cast<std::size_t>(tid)];
    acc.assign(2 * nt * volume, 0.0);
    Xi1Stats st;
    std::vector<double> om(n), zc(n), zs(n), kre(nt), kim(nt);
#pragma omp for schedule(dynamic, 1)
    for (std::size_t i1 = 0; i1 < n; ++i1) {
      for (std::size_t i2 = 0; i2 < n; ++i2) {
        if (wick && i1 == i2) continue;  // xi = xi3
        double a[kMaxDim] = {};
        double a_x2 = 0.0;
        for (int k = 0; k < dim; ++k) {
          a[k] = coord[k][i1] - coord[k][i2];
          a_x2 += a[k] * coord[k][i2];
        }
        // omega(i3) = 2 a.(xi3 - xi2); exact in double for lattice data.
        for (std::size_t i3 = 0; i3 < n; ++i3) om[i3] = -2.0 * a_x2;
        for (int k = 0; k < dim; ++k) {
          const double ak = 2.0 * a[k];
          const double* ck = coord[k].data();
#pragma omp simd
          for (std::size_t i3 = 0; i3 < n; ++i3) om[i3] += ak * ck[i3];
        }
        // (zc, zs) = (cos, sin) of t0 omega / 2.
        const double step_c = std::cos(t0 * a[last]);
        const double step_s = std::sin(t0 * a[last]);
        double c = 1.0, sn = 0.0;
        for (std::size_t i3 = 0; i3 < n; ++i3) {
          if (run_start[i3]) {
            c = std::cos(0.5 * t0 * om[i3]);
            sn = std::sin(0.5 * t0 * om[i3]);
          } else {
            const double c2 = c * step_c - sn * step_s;
            sn = sn * step_c + c * step_s;
            c = c2;
          }
          zc[i3] = c;
          zs[i3] = sn;
        }
        // w12 = phi(xi1) conj(phi(xi2))
        const double wr = vre[i1] * vre[i2] + vim[i1] * vim[i2];
        const double wi = vim[i1] * vre[i2] - vre[i1] * vim[i2];
        double* const out12 = acc.data() + 2 * nt * static_cast<std::size_t>(base + p[i1] - p[i2]);
        if (nt == 1) {
          for (std::size_t i3 = 0; i3 < n; ++i3) {
            if (wick && i3 == i2) continue;  // xi = xi1
            const double w = om[i3];
            double kr, ki;
            if (std::abs(t0 * w) < 1e-3) {
              const Complex kk = resonance_kernel(w, t0);
              kr = kk.real();
              ki = kk.imag();
            } else {
              kr = 2.0 * zs[i3] * zc[i3] / w;
              ki = -2.0 * zs[i3] * zs[i3] / w;
            }
            const double pr = wr * vre[i3] - wi * vim[i3];
            const double pi = wr * vim[i3] + wi * vre[i3];
            double* out = out12 + 2 * p[i3];
            out[0] += kr * pr - ki * pi;
            out[1] += kr * pi + ki * pr;
            if (stats) {
              st.max_abs_phase = std::max(st.max_abs_phase, std::abs(tmax * w));
              st.min_re_kernel = std::min(st.min_re_kernel, kr / t0);
            }
          }
        } else {
          for (std::size_t i3 = 0; i3 < n; ++i3) {
            if (wick && i3 == i2) continue;  // xi = xi1
            const double w = om[i3];
            double cc = zc[i3], ss = zs[i3];
            // Doubling t squares exp(-i t omega / 2).
            for (std::size_t k = 0; k < nt; ++k) {
              if (std::abs(times[k] * w) < 1e-3) {
                const Complex kk = resonance_kernel(w, times[k]);
                kre[k] = kk.real();
                kim[k] = kk.imag();
              } else {
                kre[k] = 2.0 * ss * cc / w;
                kim[k] = -2.0 * ss * ss / w;
              }
              const double c2 = cc * cc - ss * ss;
              ss = 2.0 * ss * cc;
              cc = c2;
            }
            const double pr = wr * vre[i3] - wi * vim[i3];
            const double pi = wr * vim[i3] + wi * vre[i3];
            double* out = out12 + 2 * nt * p[i3];
            for (std::size_t k = 0; k < nt; ++k) {
              out[2 * k] += kre[k] * pr - kim[k] * pi;
              out[2 * k + 1] += kre[k] * pi + kim[k] * pr;
            }
            if (stats) {
              st.max_abs_phase = std::max(st.max_abs_phase, std::abs(tmax * w));
              for (std::size_t k = 0; k < nt; ++k) {
                st.min_re_kernel = std::min(st.min_re_kernel, kre[k] / times[k]);
              }
            }
          }
        }
        if (stats) st.triples += wick ? n - 1 : n;
      }
    }
    tstats[static_cast<std::size_t>(tid)] = st;
  }

  std::vector<double>& sum = partial[0];
  for (int th = 1; th < team; ++th) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += partial[th][i];
    partial[th].clear();
    partial[th].shrink_to_fit();
  }
  if (wick) {
    for (std::size_t i = 0; i < n; ++i) {
      const double m2 = vre[i] * vre[i] + vim[i] * vim[i];
      double* out = sum.data() + 2 * nt * static_cast<std::size_t>(base + p[i]);
      for (std::size_t k = 0; k < nt; ++k) {
        out[2 * k] -= times[k] * m2 * vre[i];
        out[2 * k + 1] -= times[k] * m2 * vim[i];
      }
    }
  }
  if (stats) {
    for (int th = 0; th < team; ++th) {
      const auto& st = tstats[static_cast<std::size_t>(th)];
      stats->triples += st.triples;
      stats->max_abs_phase = std::max(stats->max_abs_phase, st.max_abs_phase);
      stats->min_re_kernel = std::min(stats->min_re_kernel, st.min_re_kernel);
    }
  }

  std::vector<std::vector<SparseSpectrum::Entry>> out(nt);
  for (std::size_t i = 0; i < volume; ++i) {
    const double* cell = sum.data() + 2 * nt * i;
    bool any = false;
    for (std::size_t k = 0; k < 2 * nt; ++k) any = any || cell[k] != 0.0;
    if (!any) continue;
    const LatticePoint xi = obox.point_at(i);
    const auto n2 = static_cast<double>(xi.norm_squared());
    for (std::size_t k = 0; k < nt; ++k) {
      const Complex v{cell[2 * k], cell[2 * k + 1]};
      if (v == Complex{}) continue;
      out[k].push_back({xi, kI * std::polar(1.0, times[k] * n2) * v});
    }
  }
  std::vector<SparseSpectrum> result;
  result.reserve(nt);
  for (auto& entries : out) result.push_back(SparseSpectrum::from_sorted(dim, std::move(entries)));
  return result;
}

std::vector<SparseSpectrum> psi_eval_on_grid(const TernaryTree& tree,
                                             const std::vector<SparseSpectrum>& leaves,
                                             double t, const QuadratureSpec& q,
                                             Nonlinearity nl) {
  require_time(t, "psi_eval");
  q.validate();
  if (static_cast<int>(leaves.size()) != tree.leaf_count()) {
    throw std::invalid_argument("psi_eval: tree has " + std::to_string(tree.leaf_count()) +
                                " leaves but " + std::to_string(leaves.size()) + " were given");
  }
  std::size_t next = 0;
  auto eval = [&](auto&& self, const TernaryTree& node) -> std::vector<SparseSpectrum> {
    if (node.is_leaf()) {
      const SparseSpectrum& phi = leaves[next++];
      std::vector<SparseSpectrum> v;
      v.reserve(static_cast<std::size_t>(q.nodes) + 1);
      for (int m = 0; m <= q.nodes; ++m) v.push_back(propagate(phi, q.time(t, m)));
      return v;
    }
    auto a = self(self, node.child(0));
    auto b = self(self, node.child(1));
    auto c = self(self, node.child(2));
    return duhamel_on_grid(a, b, c, t, nl);
  };
  return eval(eval, tree);
}

SparseSpectrum psi_eval(const TernaryTree& tree, const std::vector<SparseSpectrum>& leaves,
                        double t, const QuadratureSpec& q, Nonlinearity nl) {
  if (t == 0.0 && !tree.is_leaf()) {
    if (static_cast<int>(leaves.size()) != tree.leaf_count()) {
      throw std::invalid_argument("psi_eval: leaf count mismatch");
    }
    return SparseSpectrum(leaves.front().dim());
  }
  return psi_eval_on_grid(tree, leaves, t, q, nl).back();
}

std::vector<bool> leaf_conjugations(const TernaryTree& tree) {
  std::vector<bool> out;
  auto walk = [&](auto&& self, const TernaryTree& node, bool conj) -> void {
    if (node.is_leaf()) {
      out.push_back(conj);
      return;
    }
    self(self, node.child(0), conj);
    self(self, node.child(1), !conj);
    self(self, node.child(2), conj);
  };
  walk(walk, tree, false);
  return out;
}

double lwp_radius(const SparseSpectrum& u0) {
  const double a = fl_norm(u0, 1.0);
  if (a == 0.0) return kInfinity;
  return kLwpKappa / (a * a);
}

}  // namespace nls

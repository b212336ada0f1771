#pragma once

// The trilinear Duhamel operator
//   I[u1,u2,u3](t) = i int_0^t S(t-t') (u1 conj(u2) u3)(t') dt'
// on the frequency lattice, its tree-indexed iterates and the closed-form
// first iterate.

#include <cstdint>
#include <functional>
#include <vector>

#include "nls/lattice.hpp"
#include "nls/trees.hpp"

namespace nls {

enum class Nonlinearity { cubic, wick };

/// Composite trapezoid on M uniform subintervals of [0, t].
struct QuadratureSpec {
  int nodes = 256;

  void validate() const;
  double step(double t) const { return t / nodes; }
  double time(double t, int m) const { return t * m / nodes; }
};

/// omega = |xi|^2 - |xi1|^2 + |xi2|^2 - |xi3|^2 for xi = xi1 - xi2 + xi3.
struct ResonancePhase {
  LatticePoint xi, xi1, xi2, xi3;
  double omega = 0.0;

  static ResonancePhase of(const LatticePoint& xi1, const LatticePoint& xi2,
                           const LatticePoint& xi3);
};

/// Same as ResonancePhase::of(...).omega, as an exact integer:
/// omega = 2 (xi1 - xi2) . (xi3 - xi2).
std::int64_t resonance(const LatticePoint& xi1, const LatticePoint& xi2, const LatticePoint& xi3);

/// K(omega, t) = int_0^t exp(-i t' omega) dt' = (1 - e^{-i t omega}) / (i omega),
/// and t for |omega| < 1e-12.
Complex resonance_kernel(double omega, double t);

/// Fourier side of f1 conj(f2) f3.
SparseSpectrum trilinear_product(const SparseSpectrum& f1, const SparseSpectrum& f2,
                                 const SparseSpectrum& f3);

/// Wick-ordered product: the sum over xi = xi1 - xi2 + xi3 restricted to
/// xi != xi1, xi != xi3, minus the diagonal f1(xi) conj(f2(xi)) f3(xi).
SparseSpectrum wick_trilinear_product(const SparseSpectrum& f1, const SparseSpectrum& f2,
                                      const SparseSpectrum& f3);

SparseSpectrum nonlinear_product(Nonlinearity nl, const SparseSpectrum& f1,
                                 const SparseSpectrum& f2, const SparseSpectrum& f3);

/// I[u1,u2,u3] at every node t_m = m t / M given the children sampled at the
/// same nodes (M+1 values each). Trapezoid in the interaction picture.
std::vector<SparseSpectrum> duhamel_on_grid(const std::vector<SparseSpectrum>& u1,
                                            const std::vector<SparseSpectrum>& u2,
                                            const std::vector<SparseSpectrum>& u3, double t,
                                            Nonlinearity nl = Nonlinearity::cubic);

using Evaluator = std::function<SparseSpectrum(double)>;

/// I[u1,u2,u3](t) with the children given as functions of time.
SparseSpectrum duhamel_integral(const Evaluator& u1, const Evaluator& u2, const Evaluator& u3,
                                double t, const QuadratureSpec& q,
                                Nonlinearity nl = Nonlinearity::cubic);

struct Xi1Stats {
  std::uint64_t triples = 0;
  double max_abs_phase = 0.0;     // max |t omega| over contributing triples
  double min_re_kernel = kInfinity;  // min Re K(omega, t) / t
};

/// I[S(t)phi, S(t)phi, S(t)phi](t) from the closed-form time integral.
SparseSpectrum xi1_exact(const SparseSpectrum& phi, double t,
                         Nonlinearity nl = Nonlinearity::cubic, Xi1Stats* stats = nullptr);

/// xi1_exact at t0, 2 t0, 4 t0, ..., 2^{count-1} t0 in one pass over the
/// frequency triples.
std::vector<SparseSpectrum> xi1_exact_doubling(const SparseSpectrum& phi, double t0, int count,
                                               Nonlinearity nl = Nonlinearity::cubic,
                                               Xi1Stats* stats = nullptr);

/// Psi(tree; leaves) at t. Leaves are consumed left to right.
SparseSpectrum psi_eval(const TernaryTree& tree, const std::vector<SparseSpectrum>& leaves,
                        double t, const QuadratureSpec& q,
                        Nonlinearity nl = Nonlinearity::cubic);

/// Psi(tree; leaves) at every quadrature node.
std::vector<SparseSpectrum> psi_eval_on_grid(const TernaryTree& tree,
                                             const std::vector<SparseSpectrum>& leaves,
                                             double t, const QuadratureSpec& q,
                                             Nonlinearity nl = Nonlinearity::cubic);

/// For each leaf (left to right): true when it enters the term conjugated,
/// i.e. an odd number of middle-child edges lies on its path to the root.
std::vector<bool> leaf_conjugations(const TernaryTree& tree);

inline constexpr double kLwpKappa = 1.0 / 16.0;

/// kappa / ||u0||_{FL^1}^2, infinity for zero data.
double lwp_radius(const SparseSpectrum& u0);

}  // namespace nls

#pragma once

// Independent reference solvers: a dense-grid Strang split-step integrator
// and a direct Picard fixed-point iteration on the quadrature grid.

#include "nls/duhamel.hpp"
#include "nls/lattice.hpp"

namespace nls {

struct StepperConfig {
  /// Time step; 0 selects t / 2048. The step is shrunk so it divides t.
  double dt = 0.0;
  bool wick = false;
};

/// Fraction of the L^2 mass in |xi|_inf > 2K/3 that trips the aliasing guard.
inline constexpr double kAliasingTolerance = 1e-6;

/// Split-step solution at time t on the (2K+1)^d mode lattice |xi|_inf <= K.
/// Throws DomainError if u0 reaches beyond K and NumericalGuard when the
/// upper third of the modes carries too much mass.
SparseSpectrum evolve(const SparseSpectrum& u0, double t, const StepperConfig& cfg, int K);

/// J-th Picard iterate P_j = S(t)u0 + I[P_{j-1}, P_{j-1}, P_{j-1}], with the
/// Duhamel integrals on the quadrature grid. Requires t < lwp_radius(u0);
/// throws NumericalGuard if the FL^1 increment grows between iterations.
SparseSpectrum picard_solve(const SparseSpectrum& u0, double t, int J, const QuadratureSpec& q,
                            Nonlinearity nl = Nonlinearity::cubic);

}  // namespace nls

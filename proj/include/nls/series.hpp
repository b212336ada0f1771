#pragma once

// Power-series solution u = sum_j Xi_j(phi) built level by level on the
// quadrature grid.

#include <cstddef>
#include <vector>

#include "nls/duhamel.hpp"

namespace nls {

struct SeriesOptions {
  Nonlinearity nonlinearity = Nonlinearity::cubic;
  /// Maximum support size of any Xi_j; exceeding it throws ResourceError.
  std::size_t support_cap = std::size_t{1} << 22;
  /// Grid indices to keep. Empty keeps every node.
  std::vector<int> record;
};

class SeriesTable {
 public:
  int max_generation() const { return max_generation_; }
  double horizon() const { return horizon_; }
  int nodes() const { return nodes_; }
  double time(int m) const { return horizon_ * m / nodes_; }
  int dim() const { return dim_; }

  const std::vector<int>& recorded_nodes() const { return recorded_; }
  bool recorded(int m) const;

  /// Xi_j(phi)(t_m). Throws std::out_of_range when m was not recorded.
  const SparseSpectrum& term(int j, int m) const;

 private:
  friend SeriesTable build_series(const SparseSpectrum&, int, double, const QuadratureSpec&,
                                  const SeriesOptions&);
  int max_generation_ = 0;
  double horizon_ = 0.0;
  int nodes_ = 0;
  int dim_ = 1;
  std::vector<int> recorded_;
  std::vector<int> slot_;                          // node -> slot, -1 if dropped
  std::vector<std::vector<SparseSpectrum>> values_;  // [j][slot]
};

/// Xi_j(phi)(t_m) for j <= J, via Xi_j = sum_{j1+j2+j3=j-1} I[Xi_j1, Xi_j2, Xi_j3].
SeriesTable build_series(const SparseSpectrum& phi, int J, double t, const QuadratureSpec& q,
                         const SeriesOptions& options = {});

/// sum_{j=0}^{J} Xi_j(t_m).
SparseSpectrum partial_sum(const SeriesTable& table, int m);

/// sum_{j=lo}^{hi} Xi_j(t_m).
SparseSpectrum partial_sum(const SeriesTable& table, int m, int lo, int hi);

/// Xi_j(u0 + phi)(t) - Xi_j(phi)(t).
SparseSpectrum xi_diff(const SparseSpectrum& u0, const SparseSpectrum& phi, int j, double t,
                       const QuadratureSpec& q, Nonlinearity nl = Nonlinearity::cubic);

/// sum over T(j) of Psi(tree; phi, ..., phi); the explicit tree expansion.
SparseSpectrum tree_sum(const SparseSpectrum& phi, int j, double t, const QuadratureSpec& q,
                        Nonlinearity nl = Nonlinearity::cubic);

}  // namespace nls

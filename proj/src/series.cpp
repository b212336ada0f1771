#include "nls/series.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "nls/errors.hpp"

namespace nls {

bool SeriesTable::recorded(int m) const {
  return m >= 0 && m <= nodes_ && slot_[static_cast<std::size_t>(m)] >= 0;
}

const SparseSpectrum& SeriesTable::term(int j, int m) const {
  if (j < 0 || j > max_generation_) throw std::out_of_range("SeriesTable: generation out of range");
  if (!recorded(m)) throw std::out_of_range("SeriesTable: node " + std::to_string(m) + " not recorded");
  return values_[static_cast<std::size_t>(j)][static_cast<std::size_t>(slot_[m])];
}

SeriesTable build_series(const SparseSpectrum& phi, int J, double t, const QuadratureSpec& q,
                         const SeriesOptions& options) {
  if (J < 0) throw std::invalid_argument("build_series: J must be >= 0");
  if (!(t >= 0.0)) throw DomainError("build_series: t must be >= 0");
  q.validate();
  const int M = q.nodes;
  const int dim = phi.dim();
  const bool wick = options.nonlinearity == Nonlinearity::wick;

  SeriesTable table;
  table.max_generation_ = J;
  table.horizon_ = t;
  table.nodes_ = M;
  table.dim_ = dim;
  table.slot_.assign(static_cast<std::size_t>(M) + 1, -1);
  if (options.record.empty()) {
    for (int m = 0; m <= M; ++m) table.recorded_.push_back(m);
  } else {
    table.recorded_ = options.record;
    std::sort(table.recorded_.begin(), table.recorded_.end());
    table.recorded_.erase(std::unique(table.recorded_.begin(), table.recorded_.end()),
                          table.recorded_.end());
    for (int m : table.recorded_) {
      if (m < 0 || m > M) throw std::invalid_argument("build_series: recorded node out of range");
    }
  }
  for (std::size_t r = 0; r < table.recorded_.size(); ++r) {
    table.slot_[static_cast<std::size_t>(table.recorded_[r])] = static_cast<int>(r);
  }
  table.values_.assign(static_cast<std::size_t>(J) + 1, {});
  for (auto& row : table.values_) row.reserve(table.recorded_.size());

  const double h = t / M;
  const Complex half_step{0.0, 0.5 * h};
  // Interaction-picture state per level: w_j(t_m) = S(-t_m) Xi_j(t_m), and
  // the integrand at the previous node for the trapezoid update.
  std::vector<SparseSpectrum> w(static_cast<std::size_t>(J) + 1, SparseSpectrum(dim));
  std::vector<SparseSpectrum> g_prev(static_cast<std::size_t>(J) + 1, SparseSpectrum(dim));

  std::vector<SparseSpectrum> xi(static_cast<std::size_t>(J) + 1, SparseSpectrum(dim));
  std::vector<SparseSpectrum> rxi(static_cast<std::size_t>(J) + 1, SparseSpectrum(dim));
  std::vector<SparseSpectrum> pairs(static_cast<std::size_t>(J) + 1, SparseSpectrum(dim));
  std::vector<Complex> mu(static_cast<std::size_t>(J) + 1);

  for (int m = 0; m <= M; ++m) {
    const double tm = h * m;
    xi[0] = propagate(phi, tm);
    for (int j = 0; j <= J; ++j) {
      if (j > 0) {
        // N_j = sum_{a+b+c=j-1} N[Xi_a, Xi_b, Xi_c] = sum_b P_{j-1-b} * R Xi_b
        // with P_k = sum_{a+c=k} Xi_a * Xi_c.
        SparseSpectrum g(dim);
        for (int b = 0; b <= j - 1; ++b) {
          const auto& pk = pairs[static_cast<std::size_t>(j - 1 - b)];
          if (pk.empty() || rxi[b].empty()) continue;
          g = add_exact(g, convolve(pk, rxi[b]));
        }
        if (wick) {
          for (int a = 0; a <= j - 1; ++a) {
            g = add_exact(g, xi[a], -2.0 * mu[static_cast<std::size_t>(j - 1 - a)]);
          }
        }
        const SparseSpectrum gi = propagate(g, -tm);
        if (m > 0) {
          w[j] = add_exact(w[j], add_exact(g_prev[j], gi), half_step);
          xi[j] = propagate(w[j], tm);
        }
        g_prev[j] = gi;
        if (xi[j].size() > options.support_cap) {
          throw ResourceError("build_series: support of Xi_" + std::to_string(j) + " reached " +
                              std::to_string(xi[j].size()) + " > cap " +
                              std::to_string(options.support_cap));
        }
      }
      if (j == J) break;
      // Level j is final at this node; extend the pair and mu caches.
      rxi[j] = reflect_conj(xi[j]);
      SparseSpectrum pk(dim);
      Complex mk{};
      for (int a = 0; a <= j; ++a) {
        const int c = j - a;
        if (wick) mk += inner_product(xi[a], xi[c]);
        if (a > c) continue;
        if (xi[a].empty() || xi[c].empty()) continue;
        SparseSpectrum prod = convolve(xi[a], xi[c]);
        pk = add_exact(pk, prod, a == c ? 1.0 : 2.0);
      }
      pairs[j] = std::move(pk);
      mu[j] = mk;
    }
    if (table.slot_[m] >= 0) {
      for (int j = 0; j <= J; ++j) table.values_[j].push_back(xi[j]);
    }
  }
  return table;
}

SparseSpectrum partial_sum(const SeriesTable& table, int m) {
  return partial_sum(table, m, 0, table.max_generation());
}

SparseSpectrum partial_sum(const SeriesTable& table, int m, int lo, int hi) {
  SparseSpectrum acc(table.dim());
  for (int j = std::max(lo, 0); j <= std::min(hi, table.max_generation()); ++j) {
    acc = add_exact(acc, table.term(j, m));
  }
  return acc;
}

SparseSpectrum xi_diff(const SparseSpectrum& u0, const SparseSpectrum& phi, int j, double t,
                       const QuadratureSpec& q, Nonlinearity nl) {
  if (u0.dim() != phi.dim()) throw std::invalid_argument("xi_diff: dimension mismatch");
  if (u0.empty()) return SparseSpectrum(phi.dim());
  SeriesOptions opt;
  opt.nonlinearity = nl;
  opt.record = {q.nodes};
  const auto with = build_series(add_exact(u0, phi), j, t, q, opt);
  const auto without = build_series(phi, j, t, q, opt);
  return with.term(j, q.nodes) - without.term(j, q.nodes);
}

SparseSpectrum tree_sum(const SparseSpectrum& phi, int j, double t, const QuadratureSpec& q,
                        Nonlinearity nl) {
  SparseSpectrum acc(phi.dim());
  for (const auto& tree : enumerate_trees(j)) {
    std::vector<SparseSpectrum> leaves(static_cast<std::size_t>(tree.leaf_count()), phi);
    acc = add_exact(acc, psi_eval(tree, leaves, t, q, nl));
  }
  return acc;
}

}  // namespace nls

#pragma once

// Inflation data phi_n = R (1_{N e1 + Q_A} + 1_{2N e1 + Q_A}), the cube weight
// f(A), the three parameter regimes and the checker for conditions (i)-(vi).
//
// N can be astronomically large at the threshold (Case 2 in d=1 needs
// (log N)^{1/32} >= 10 n), so every size is carried as a logarithm split into
// a multiple of log N plus a remainder. Exponent cancellations between N
// powers then happen on the coefficients, exactly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nls/lattice.hpp"

namespace nls {

enum class Regime { case1, case2, case3 };

const char* regime_name(Regime r);
Regime parse_regime(const std::string& name);

/// log(x) = coef * log N + rest.
struct LogSize {
  double coef = 0.0;
  double rest = 0.0;

  double at(double lnN) const { return coef == 0.0 ? rest : coef * lnN + rest; }
  friend LogSize operator+(LogSize a, LogSize b) { return {a.coef + b.coef, a.rest + b.rest}; }
  friend LogSize operator-(LogSize a, LogSize b) { return {a.coef - b.coef, a.rest - b.rest}; }
  friend LogSize operator*(double k, LogSize a) { return {k * a.coef, k * a.rest}; }
  static LogSize constant(double v) { return {0.0, v}; }
};

struct InflationParams {
  int n = 1;
  int d = 1;
  double s = -1.0;
  double log2N = 0.0;  // N = 2^log2N
  LogSize lnA, lnR, lnT;
  std::int64_t N = 0;  // 0 when N does not fit in 62 bits
  std::int64_t A = 0;  // 0 when A does not fit in 62 bits
  double delta = 0.0;
  double theta = 0.0;
  Regime regime = Regime::case1;

  double lnN() const;
  double R() const;
  double T() const;
  /// log f(A).
  double ln_f() const;
  double f() const;
  double s_crit() const { return d / 2.0 - 1.0; }
  /// True when N and A are small enough to build phi_n on the lattice.
  bool realizable() const { return N > 0 && A > 0; }
};

/// phi_n for the given side A (even, at most N so the cubes are disjoint).
SparseSpectrum build_phi_n(int d, std::int64_t N, std::int64_t A, double R);
SparseSpectrum build_phi_n(const InflationParams& p);

/// 1 if s < -d/2, (log A)^{1/2} if s = -d/2, A^{d/2+s} otherwise.
double f_of_A(double A, double s, int d);

/// Case selection for s vs -d/2, with s compared to -d/2 at 1e-12.
Regime regime_for(double s, int d);

/// Parameters for (n, s, d) at N = 2^log2N. log2N must be a positive integer.
/// Throws DomainError for inadmissible (s, d) and std::invalid_argument,
/// naming the condition, when N is too small to realize the regime.
InflationParams select_parameters(int n, double s, int d, double log2N);

struct ConditionEntry {
  std::string id;
  std::string description;
  double log10_small = 0.0;  // the side that must be much smaller
  double log10_large = 0.0;
  double log10_ratio = 0.0;  // log10(large / small)
  bool pass = false;
  bool derived = false;
};

struct ConditionReport {
  double margin = 10.0;
  std::vector<ConditionEntry> entries;

  bool all_pass() const;
  /// First failing entry, or nullptr.
  const ConditionEntry* first_failure() const;
  const ConditionEntry& get(const std::string& id) const;
};

/// Evaluates (i)-(vi) with pass <=> large/small >= margin.
ConditionReport check_conditions(const InflationParams& p, const SparseSpectrum& u0,
                                 double margin = 10.0);

struct ThresholdResult {
  bool found = false;
  double log2N0 = 0.0;       // smallest passing exponent found
  bool verified = false;     // all samples above log2N0 also pass
  std::vector<double> samples;
};

/// Smallest k with select_parameters(n, s, d, k) passing check_conditions.
ThresholdResult find_threshold(int n, double s, int d, const SparseSpectrum& u0,
                               double margin = 10.0, double max_log2N = 1e300);

struct BackgroundProfile {
  enum class Kind { zero, gaussian };
  Kind kind = Kind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;

  static BackgroundProfile zero() { return {Kind::zero, 0.0, 1.0}; }
  static BackgroundProfile gaussian(double amplitude, double width) {
    return {Kind::gaussian, amplitude, width};
  }
  /// "zero" or "gaussian(a,w)".
  static BackgroundProfile parse(const std::string& text);
  std::string to_string() const;
};

/// amplitude * exp(-|xi|^2 / width^2) on |xi|_inf <= 4 width.
SparseSpectrum build_background(int d, const BackgroundProfile& profile);

/// "2^k" when N is not representable, decimal otherwise.
std::string format_power_of_two(double log2N);

/// key=value block: n, d, s, N, A, R, T, delta, theta, regime.
void write_params(std::ostream& os, const InflationParams& p);
InflationParams read_params(std::istream& is);

}  // namespace nls

#pragma once

// Experiment drivers behind the nls_lab subcommands. Each run_* function is
// pure: it takes a parsed configuration and returns a report; the CLI turns
// reports into CSV, summaries and exit codes.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nls/config.hpp"
#include "nls/construction.hpp"
#include "nls/duhamel.hpp"

namespace nls {

inline constexpr const char* kCsvHeader = "# nls-inflation-lab v1";

struct CsvOptions {
  bool timestamp = true;
};

/// Writes the schema header line and, unless disabled, a timestamp comment.
void write_csv_preamble(std::ostream& os, const CsvOptions& opt);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square of the residuals
};

/// Least-squares line through (x, y). Throws ConfigError for fewer than two
/// distinct abscissae.
LineFit least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// trees

struct TreesRow {
  int j = 0;
  std::uint64_t count = 0;
  std::int64_t enumerated = -1;  // -1 when j is above the enumeration limit
  bool cross_checked = false;
  double bound_ratio = 0.0;      // #T(j) (1+j)^2 / C0^j
};

struct TreesReport {
  std::vector<TreesRow> rows;
  bool ok = false;
};

TreesReport run_trees(int jmax, int enumerate_max = 5);
void write_csv(std::ostream& os, const TreesReport& rep, const CsvOptions& opt);

// ---------------------------------------------------------------------------
// verify-lemmas

struct LemmaConfig {
  int jmax = 3;
  int nodes = 128;
  double t_fraction = 0.5;  // t = t_fraction * lwp_radius of the data
  double ceiling = 10.0;    // largest acceptable fitted constant
  double spread = 2.0;      // largest acceptable max/min across j

  static LemmaConfig from(const Config& cfg);
};

struct LemmaFit {
  std::string estimate;  // fl1_term, flinf_term, diff_fl1, diff_fl2, diff_flinf
  std::string family;
  std::vector<double> constants;  // per j = 1..jmax, the j-th root of LHS / shape
  double spread = 0.0;
  bool ok = false;
};

struct ConvolutionRow {
  int d = 1;
  int A = 0;
  double min_ratio = 0.0;  // min over a+b+Q_A of (1_{a+Q_A} * 1_{b+Q_A}) / A^d
};

struct SandwichRow {
  int d = 1;
  double s = 0.0;
  std::int64_t N = 0;
  std::int64_t A = 0;
  double ratio = 0.0;  // ||phi_n||_{H^s} / (R A^{d/2} N^s)
  bool ok = false;
};

struct LemmaReport {
  LemmaConfig config;
  std::vector<LemmaFit> fits;
  double single_mode_ratio = 0.0;
  std::vector<ConvolutionRow> convolution;
  std::vector<SandwichRow> sandwich;
  double zero_background_diff = 0.0;
  bool ok = false;
};

LemmaReport run_verify_lemmas(const LemmaConfig& cfg);
void write_csv(std::ostream& os, const LemmaReport& rep, const CsvOptions& opt);

/// Smallest value of 1_{a+Q_A} * 1_{b+Q_A} on a+b+Q_A, by exhaustive sum.
double cube_convolution_min(int d, std::int64_t A, const LatticePoint& a, const LatticePoint& b);

// ---------------------------------------------------------------------------
// xi1-bound

struct Xi1BoundConfig {
  int d = 1;
  double s = -0.5;
  int n = 1;
  std::vector<double> N = {32, 64, 128, 256};
  double c = 0.01;  // t = c N^{-2}
  double R = -1.0;  // < 0: take R from the regime

  static Xi1BoundConfig from(const Config& cfg);
};

struct Xi1BoundRow {
  std::int64_t N = 0;
  std::int64_t A = 0;
  double R = 0.0;
  double t = 0.0;
  double norm_hs = 0.0;
  double predictor = 0.0;      // t R^3 A^{2d} f(A)
  double ratio = 0.0;
  double min_cube_ratio = 0.0; // min_{Q_A} |F[Xi_1]| / (t R^3 A^{2d})
  double max_abs_phase = 0.0;
  double min_re_kernel = 0.0;  // min Re K / t over contributing triples
};

struct Xi1BoundReport {
  std::vector<Xi1BoundRow> rows;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  bool band_ok = false;   // max/min <= 4 and min >= 0.1
  bool phase_ok = false;  // Re K >= t/2 everywhere
  bool ok = false;
};

Xi1BoundReport run_xi1_bound(const Xi1BoundConfig& cfg);
void write_csv(std::ostream& os, const Xi1BoundReport& rep, const CsvOptions& opt);

// ---------------------------------------------------------------------------
// inflate

struct InflateConfig {
  int n = 1;
  int d = 1;
  double s = -0.5;
  double log2N = 8;
  int J = 3;
  int nodes = 256;
  BackgroundProfile background = BackgroundProfile::gaussian(1.0, 1.0);
  bool wick = false;
  double margin = 10.0;

  static InflateConfig from(const Config& cfg);
};

struct InflateRow {
  double t = 0.0;
  double xi0_hs = 0.0;          // ||S(t) u_{0,n}||
  double xi1_phi_hs = 0.0;      // ||Xi_1(phi_n)(t)||
  double xi1_diff_hs = 0.0;     // ||Xi_1(u_{0,n})(t) - Xi_1(phi_n)(t)||
  double tail_hs = 0.0;         // ||sum_{j=2}^J Xi_j(u_{0,n})(t)||
  double partial_sum_hs = 0.0;  // ||sum_{j=0}^J Xi_j(u_{0,n})(t)||
  double data_dist_hs = 0.0;    // ||u_{0,n} - u_0||
  double tail_bound = 0.0;      // t^2 R^5 A^{4d} f(A)

  /// xi1_phi / (xi0 + xi1_diff + tail).
  double dominance_ratio() const;
};

struct InflateReport {
  InflateConfig config;
  InflationParams params;
  ConditionReport conditions;
  std::vector<InflateRow> rows;  // t_m = T m / M for m = 1, 2, 4, ..., M
  double background_hs = 0.0;
  double argmax_t = 0.0;         // grid time maximizing partial_sum_hs
  bool dominance = false;
  bool data_close = false;

  const InflateRow& at_T() const { return rows.back(); }
  /// 0 on success, 2 when a condition or the dominance check fails.
  int exit_code() const;
  /// Human-readable reason for a nonzero exit code.
  std::string failure() const;
};

InflateReport run_inflate(const InflateConfig& cfg);
void write_csv(std::ostream& os, const InflateReport& rep, const CsvOptions& opt);

// ---------------------------------------------------------------------------
// sweep

struct SweepConfig {
  std::string axis = "t";  // t, R or A
  int d = 1;
  double s = -0.5;
  double log2N = 6;
  std::int64_t A = 16;
  double R = 1.0;
  double c = 0.01;
  std::vector<double> values;  // empty: per-axis defaults

  static SweepConfig from(const Config& cfg);
};

struct SweepPoint {
  double x = 0.0;
  double norm_hs = 0.0;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepPoint> points;
  LineFit fit;
  double expected = 0.0;
  double tolerance = 0.0;
  bool ok = false;
};

SweepReport run_scaling_sweep(const SweepConfig& cfg);
void write_csv(std::ostream& os, const SweepReport& rep, const CsvOptions& opt);

// ---------------------------------------------------------------------------
// oracle-compare

struct OracleCompareConfig {
  int d = 1;
  BackgroundProfile data = BackgroundProfile::gaussian(0.5, 1.0);
  double t_fraction = 0.5;  // t = t_fraction * lwp_radius
  int Jmax = 4;
  int nodes = 256;
  int K = 64;
  double dt = 0.0;
  bool wick = false;
  double tolerance = 1e-4;

  static OracleCompareConfig from(const Config& cfg);
};

struct OracleCompareRow {
  int J = 0;
  double rel_l2 = 0.0;
};

struct OracleCompareReport {
  OracleCompareConfig config;
  double t = 0.0;
  std::vector<OracleCompareRow> rows;
  double mass_drift = 0.0;
  bool monotone = false;
  bool within_tolerance = false;
  bool ok = false;
};

OracleCompareReport run_oracle_compare(const OracleCompareConfig& cfg);
void write_csv(std::ostream& os, const OracleCompareReport& rep, const CsvOptions& opt);

}  // namespace nls

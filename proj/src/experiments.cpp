#include "nls/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>

#include "nls/dense_box.hpp"
#include "nls/errors.hpp"
#include "nls/oracle.hpp"
#include "nls/series.hpp"
#include "nls/trees.hpp"

namespace nls {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double ratio_spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *lo > 0.0 ? *hi / *lo : kInfinity;
}

std::int64_t checked_pow2(double log2N, const char* who) {
  if (!(log2N >= 1.0) || log2N > 62.0 || std::floor(log2N) != log2N) {
    throw ConfigError(std::string(who) + ": log2N must be an integer in [1, 62]");
  }
  return std::int64_t{1} << static_cast<int>(log2N);
}

double log2_of_N(const Config& cfg, double fallback) {
  if (cfg.has("N")) {
    const double N = cfg.get_double("N", 0.0);
    const double k = std::log2(N);
    if (!(N >= 2.0) || std::floor(k) != k) throw ConfigError("N must be a power of two");
    return k;
  }
  return cfg.get_double("log2N", fallback);
}

// Runs body(i) for i < count in parallel and rethrows the first exception.
template <class F>
void parallel_points(std::size_t count, F&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(nls_sweep_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

void write_csv_preamble(std::ostream& os, const CsvOptions& opt) {
  os << kCsvHeader << '\n';
  if (opt.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "# generated " << buf << '\n';
  }
}

LineFit least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ConfigError("least_squares_slope: size mismatch");
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2 || *std::min_element(x.begin(), x.end()) == *std::max_element(x.begin(), x.end())) {
    throw ConfigError("least_squares_slope: need two distinct abscissae");
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    r2 += r * r;
  }
  fit.residual = std::sqrt(r2 / n);
  return fit;
}

// ---------------------------------------------------------------------------
// trees

TreesReport run_trees(int jmax, int enumerate_max) {
  if (jmax < 0) throw ConfigError("trees: jmax must be >= 0");
  if (jmax > kMaxEnumeratedGeneration) {
    throw ResourceError("trees: jmax = " + std::to_string(jmax) + " exceeds the cap " +
                        std::to_string(kMaxEnumeratedGeneration));
  }
  enumerate_max = std::min(enumerate_max, kMaxEnumeratedGeneration);
  const double c0 = tree_bound_constant();
  TreesReport rep;
  rep.ok = true;
  for (int j = 0; j <= jmax; ++j) {
    TreesRow row;
    row.j = j;
    row.count = count_trees(j);
    if (j <= enumerate_max) {
      row.enumerated = static_cast<std::int64_t>(enumerate_trees(j).size());
      row.cross_checked = static_cast<std::uint64_t>(row.enumerated) == row.count;
      rep.ok = rep.ok && row.cross_checked;
    }
    row.bound_ratio = static_cast<double>(row.count) * (1.0 + j) * (1.0 + j) / std::pow(c0, j);
    rep.ok = rep.ok && row.bound_ratio <= 1.0;
    rep.rows.push_back(row);
  }
  return rep;
}

void write_csv(std::ostream& os, const TreesReport& rep, const CsvOptions& opt) {
  write_csv_preamble(os, opt);
  os << "j,count,enumerated,cross_checked,bound_ratio\n";
  for (const auto& r : rep.rows) {
    os << r.j << ',' << r.count << ',' << r.enumerated << ',' << (r.cross_checked ? 1 : 0) << ','
       << num(r.bound_ratio) << '\n';
  }
}

// ---------------------------------------------------------------------------
// verify-lemmas

LemmaConfig LemmaConfig::from(const Config& cfg) {
  LemmaConfig c;
  c.jmax = cfg.get_int("jmax", c.jmax);
  c.nodes = cfg.get_int("nodes", c.nodes);
  c.t_fraction = cfg.get_double("t_fraction", c.t_fraction);
  c.ceiling = cfg.get_double("ceiling", c.ceiling);
  c.spread = cfg.get_double("spread", c.spread);
  if (c.jmax < 1) throw ConfigError("verify-lemmas: jmax must be >= 1");
  if (!(c.t_fraction > 0.0 && c.t_fraction <= 1.0)) {
    throw ConfigError("verify-lemmas: t_fraction must lie in (0, 1]");
  }
  return c;
}

double cube_convolution_min(int d, std::int64_t A, const LatticePoint& a, const LatticePoint& b) {
  const SparseSpectrum ca = cube_indicator(a, A);
  const SparseSpectrum cb = cube_indicator(b, A);
  const SparseSpectrum target = cube_indicator(a + b, A);
  const LatticeBox bbox = bounding_box(cb);
  double lo = kInfinity;
  for (const auto& x : target) {
    std::int64_t count = 0;
    for (const auto& y : ca) {
      if (bbox.contains(x.xi - y.xi)) ++count;
    }
    lo = std::min(lo, static_cast<double>(count));
  }
  (void)d;
  return lo;
}

namespace {

struct TermFamily {
  std::string name;
  SparseSpectrum data;
};

std::vector<TermFamily> term_families() {
  std::vector<TermFamily> fams;
  fams.push_back({"gaussian", build_background(1, BackgroundProfile::gaussian(0.5, 1.0))});
  fams.push_back({"cubes", build_phi_n(1, 8, 2, 0.25)});
  fams.push_back({"gaussian2d", build_background(2, BackgroundProfile::gaussian(0.25, 1.0))});
  return fams;
}

LemmaFit make_fit(const std::string& estimate, const std::string& family,
                  std::vector<double> constants, const LemmaConfig& cfg) {
  LemmaFit fit;
  fit.estimate = estimate;
  fit.family = family;
  fit.constants = std::move(constants);
  fit.spread = ratio_spread(fit.constants);
  const double top = fit.constants.empty()
                         ? 0.0
                         : *std::max_element(fit.constants.begin(), fit.constants.end());
  fit.ok = fit.spread < cfg.spread && top <= cfg.ceiling;
  return fit;
}

}  // namespace

LemmaReport run_verify_lemmas(const LemmaConfig& cfg) {
  LemmaReport rep;
  rep.config = cfg;
  const QuadratureSpec q{cfg.nodes};
  q.validate();

  // Term bounds: ||Xi_j||_{FL^1} <~ (C t)^j ||phi||_1^{2j+1} and
  // ||Xi_j||_{FL^inf} <~ (C t)^j ||phi||_1^{2j-1} ||phi||_2^2.
  for (const auto& fam : term_families()) {
    const double t = cfg.t_fraction * lwp_radius(fam.data);
    SeriesOptions opt;
    opt.record = {cfg.nodes};
    const SeriesTable tab = build_series(fam.data, cfg.jmax, t, q, opt);
    const double n1 = fl_norm(fam.data, 1.0);
    const double n2 = fl_norm(fam.data, 2.0);
    std::vector<double> c1, cinf;
    for (int j = 1; j <= cfg.jmax; ++j) {
      const SparseSpectrum& xj = tab.term(j, cfg.nodes);
      const double tj = std::pow(t, j);
      c1.push_back(std::pow(fl_norm(xj, 1.0) / (tj * std::pow(n1, 2 * j + 1)), 1.0 / j));
      cinf.push_back(std::pow(
          fl_norm(xj, kInfinity) / (tj * std::pow(n1, 2 * j - 1) * n2 * n2), 1.0 / j));
    }
    rep.fits.push_back(make_fit("fl1_term", fam.name, std::move(c1), cfg));
    rep.fits.push_back(make_fit("flinf_term", fam.name, std::move(cinf), cfg));
  }

  // Difference bound: ||Xi_j(u0 + phi) - Xi_j(phi)||_p
  //   <~ (C t)^j ||u0||_p (||u0||_1^{2j} + ||phi||_1^{2j}).
  {
    const SparseSpectrum u0 = build_background(1, BackgroundProfile::gaussian(0.5, 1.0));
    const SparseSpectrum phi = build_phi_n(1, 8, 2, 0.25);
    const SparseSpectrum sum = u0 + phi;
    const double t = cfg.t_fraction * lwp_radius(sum);
    SeriesOptions opt;
    opt.record = {cfg.nodes};
    const SeriesTable with = build_series(sum, cfg.jmax, t, q, opt);
    const SeriesTable without = build_series(phi, cfg.jmax, t, q, opt);
    const double u1 = fl_norm(u0, 1.0);
    const double p1 = fl_norm(phi, 1.0);
    const std::pair<const char*, double> norms[] = {
        {"diff_fl1", 1.0}, {"diff_fl2", 2.0}, {"diff_flinf", kInfinity}};
    for (const auto& [name, p] : norms) {
      std::vector<double> cs;
      for (int j = 1; j <= cfg.jmax; ++j) {
        const SparseSpectrum diff = with.term(j, cfg.nodes) - without.term(j, cfg.nodes);
        const double shape =
            std::pow(t, j) * fl_norm(u0, p) * (std::pow(u1, 2 * j) + std::pow(p1, 2 * j));
        cs.push_back(std::pow(fl_norm(diff, p) / shape, 1.0 / j));
      }
      rep.fits.push_back(make_fit(name, "gaussian+cubes", std::move(cs), cfg));
    }

    // u0 = 0: the two series coincide term by term.
    const SeriesTable again = build_series(phi, cfg.jmax, t, q, opt);
    for (int j = 0; j <= cfg.jmax; ++j) {
      const SparseSpectrum diff = again.term(j, cfg.nodes) - without.term(j, cfg.nodes);
      rep.zero_background_diff = std::max(rep.zero_background_diff, fl_norm(diff, 1.0));
    }
  }

  // Single mode: Xi_1 is exactly resonant, ||Xi_1||_1 = t |a|^3.
  {
    const Complex a{0.6, -0.3};
    const SparseSpectrum mode = SparseSpectrum::delta(LatticePoint{3}, a);
    const double t = 0.37;
    rep.single_mode_ratio = fl_norm(xi1_exact(mode, t), 1.0) / (t * std::pow(std::abs(a), 3));
  }

  for (int d : {1, 2}) {
    for (std::int64_t A : {4, 8, 16}) {
      ConvolutionRow row;
      row.d = d;
      row.A = A;
      const LatticePoint origin(d);
      const LatticePoint shifts[] = {origin, LatticePoint::along_axis(d, 0, 3 * A),
                                     LatticePoint::along_axis(d, d - 1, -5)};
      row.min_ratio = kInfinity;
      for (const auto& a : shifts) {
        for (const auto& b : shifts) {
          row.min_ratio = std::min(row.min_ratio, cube_convolution_min(d, A, a, b) /
                                                      std::pow(static_cast<double>(A), d));
        }
      }
      rep.convolution.push_back(row);
    }
  }

  const std::pair<int, double> regimes[] = {{1, -0.7}, {1, -0.5}, {2, -1.2}, {2, -0.5}};
  for (const auto& [d, s] : regimes) {
    for (int k = 6; k <= 10; ++k) {
      InflationParams p;
      try {
        p = select_parameters(1, s, d, k);
      } catch (const std::invalid_argument&) {
        continue;  // N too small for this regime
      }
      SandwichRow row;
      row.d = d;
      row.s = s;
      row.N = p.N;
      row.A = p.A;
      const double R = p.R();
      row.ratio = sobolev_norm(build_phi_n(p), s) /
                  (R * std::pow(static_cast<double>(p.A), d / 2.0) *
                   std::pow(static_cast<double>(p.N), s));
      row.ok = row.ratio >= std::exp2(s) * 0.5 && row.ratio <= 4.0;
      rep.sandwich.push_back(row);
    }
  }

  rep.ok = std::abs(rep.single_mode_ratio - 1.0) <= 1e-12 && rep.zero_background_diff == 0.0;
  for (const auto& f : rep.fits) rep.ok = rep.ok && f.ok;
  for (const auto& c : rep.convolution) rep.ok = rep.ok && c.min_ratio >= 0.25;
  for (const auto& s : rep.sandwich) rep.ok = rep.ok && s.ok;
  return rep;
}

void write_csv(std::ostream& os, const LemmaReport& rep, const CsvOptions& opt) {
  write_csv_preamble(os, opt);
  os << "section,name,family,j,value,ok\n";
  for (const auto& f : rep.fits) {
    for (std::size_t k = 0; k < f.constants.size(); ++k) {
      os << "fit," << f.estimate << ',' << f.family << ',' << k + 1 << ','
         << num(f.constants[k]) << ',' << (f.ok ? 1 : 0) << '\n';
    }
    os << "spread," << f.estimate << ',' << f.family << ",," << num(f.spread) << ','
       << (f.ok ? 1 : 0) << '\n';
  }
  os << "single_mode,xi1_fl1_ratio,delta,1," << num(rep.single_mode_ratio) << ','
     << (std::abs(rep.single_mode_ratio - 1.0) <= 1e-12 ? 1 : 0) << '\n';
  os << "zero_background,diff_fl1,cubes,," << num(rep.zero_background_diff) << ','
     << (rep.zero_background_diff == 0.0 ? 1 : 0) << '\n';
  for (const auto& c : rep.convolution) {
    os << "convolution,d" << c.d << "_A" << c.A << ",cube,," << num(c.min_ratio) << ','
       << (c.min_ratio >= 0.25 ? 1 : 0) << '\n';
  }
  for (const auto& s : rep.sandwich) {
    os << "sandwich,d" << s.d << "_s" << num(s.s) << "_N" << s.N << ",phi_n,," << num(s.ratio)
       << ',' << (s.ok ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------
// xi1-bound

Xi1BoundConfig Xi1BoundConfig::from(const Config& cfg) {
  Xi1BoundConfig c;
  c.d = cfg.get_int("d", c.d);
  c.s = cfg.get_double("s", c.s);
  c.n = cfg.get_int("n", c.n);
  c.N = cfg.get_list("N", c.N);
  c.c = cfg.get_double("c", c.c);
  c.R = cfg.get_double("R", c.R);
  return c;
}

Xi1BoundReport run_xi1_bound(const Xi1BoundConfig& cfg) {
  if (!(cfg.c > 0.0 && cfg.c <= 0.01)) {
    throw ConfigError("xi1-bound: t = c N^-2 needs 0 < c <= 0.01");
  }
  if (cfg.N.empty()) throw ConfigError("xi1-bound: empty N list");
  Xi1BoundReport rep;
  rep.rows.resize(cfg.N.size());
  std::vector<double> log2N(cfg.N.size());
  for (std::size_t i = 0; i < cfg.N.size(); ++i) {
    const double k = std::log2(cfg.N[i]);
    if (std::floor(k) != k) throw ConfigError("xi1-bound: N must be a power of two");
    log2N[i] = k;
  }
  parallel_points(cfg.N.size(), [&](std::size_t i) {
    const InflationParams p = select_parameters(cfg.n, cfg.s, cfg.d, log2N[i]);
    Xi1BoundRow& row = rep.rows[i];
    row.N = p.N;
    row.A = p.A;
    row.R = cfg.R >= 0.0 ? cfg.R : p.R();
    row.t = cfg.c / (static_cast<double>(p.N) * static_cast<double>(p.N));
    const SparseSpectrum phi = build_phi_n(cfg.d, p.N, p.A, row.R);
    Xi1Stats stats;
    const SparseSpectrum xi = xi1_exact(phi, row.t, Nonlinearity::cubic, &stats);
    const double a2d = std::pow(static_cast<double>(p.A), 2.0 * cfg.d);
    const double scale = row.t * row.R * row.R * row.R * a2d;
    row.norm_hs = sobolev_norm(xi, cfg.s);
    row.predictor = scale * f_of_A(static_cast<double>(p.A), cfg.s, cfg.d);
    row.ratio = row.predictor > 0.0 ? row.norm_hs / row.predictor : 0.0;
    row.min_cube_ratio = kInfinity;
    for (const auto& e : cube_indicator(LatticePoint(cfg.d), p.A)) {
      row.min_cube_ratio = std::min(row.min_cube_ratio, std::abs(xi(e.xi)));
    }
    row.min_cube_ratio = scale > 0.0 ? row.min_cube_ratio / scale : 0.0;
    row.max_abs_phase = stats.max_abs_phase;
    row.min_re_kernel = stats.triples > 0 ? stats.min_re_kernel : 1.0;
  });
  rep.ratio_min = kInfinity;
  rep.ratio_max = 0.0;
  rep.phase_ok = true;
  for (const auto& r : rep.rows) {
    rep.ratio_min = std::min(rep.ratio_min, r.ratio);
    rep.ratio_max = std::max(rep.ratio_max, r.ratio);
    rep.phase_ok = rep.phase_ok && r.min_re_kernel >= 0.5;
  }
  rep.band_ok = rep.ratio_min >= 0.1 && rep.ratio_max <= 4.0 * rep.ratio_min;
  rep.ok = rep.band_ok && rep.phase_ok;
  return rep;
}

void write_csv(std::ostream& os, const Xi1BoundReport& rep, const CsvOptions& opt) {
  write_csv_preamble(os, opt);
  os << "N,A,R,t,xi1_hs,predictor,ratio,min_cube_ratio,max_abs_phase,min_re_kernel\n";
  for (const auto& r : rep.rows) {
    os << r.N << ',' << r.A << ',' << num(r.R) << ',' << num(r.t) << ',' << num(r.norm_hs) << ','
       << num(r.predictor) << ',' << num(r.ratio) << ',' << num(r.min_cube_ratio) << ','
       << num(r.max_abs_phase) << ',' << num(r.min_re_kernel) << '\n';
  }
  os << "# band_ok=" << rep.band_ok << " phase_ok=" << rep.phase_ok << '\n';
}

// ---------------------------------------------------------------------------
// inflate

InflateConfig InflateConfig::from(const Config& cfg) {
  InflateConfig c;
  c.n = cfg.get_int("n", c.n);
  c.d = cfg.get_int("d", c.d);
  c.s = cfg.get_double("s", c.s);
  c.log2N = log2_of_N(cfg, c.log2N);
  c.J = cfg.get_int("J", c.J);
  c.nodes = cfg.get_int("nodes", c.nodes);
  if (cfg.has("background")) c.background = BackgroundProfile::parse(cfg.get("background", ""));
  c.wick = cfg.get_bool("wick", c.wick);
  c.margin = cfg.get_double("margin", c.margin);
  if (c.J < 1) throw ConfigError("inflate: J must be >= 1");
  return c;
}

double InflateRow::dominance_ratio() const {
  const double rest = xi0_hs + xi1_diff_hs + tail_hs;
  return rest > 0.0 ? xi1_phi_hs / rest : kInfinity;
}

int InflateReport::exit_code() const {
  return conditions.all_pass() && dominance && data_close ? 0 : 2;
}

std::string InflateReport::failure() const {
  if (const ConditionEntry* e = conditions.first_failure()) {
    return "condition (" + e->id + ") fails: " + e->description + ", log10 ratio " +
           num(e->log10_ratio) + " < log10 margin " + num(std::log10(conditions.margin));
  }
  if (!dominance) {
    return "Xi_1(phi_n)(T) does not dominate: ratio " + num(at_T().dominance_ratio());
  }
  if (!data_close) {
    return "||u0n - u0||_{H^s} = " + num(at_T().data_dist_hs) + " is not below " +
           num(background_hs / 10.0 + 0.1);
  }
  return {};
}

InflateReport run_inflate(const InflateConfig& cfg) {
  if (cfg.J < 1) throw ConfigError("inflate: J must be >= 1");
  const QuadratureSpec q{cfg.nodes};
  q.validate();
  InflateReport rep;
  rep.config = cfg;
  rep.params = select_parameters(cfg.n, cfg.s, cfg.d, cfg.log2N);
  const InflationParams& p = rep.params;
  const SparseSpectrum u0 = build_background(cfg.d, cfg.background);
  rep.conditions = check_conditions(p, u0, cfg.margin);
  const SparseSpectrum phi = build_phi_n(p);
  const SparseSpectrum u0n = u0 + phi;
  const Nonlinearity nl = cfg.wick ? Nonlinearity::wick : Nonlinearity::cubic;
  const double T = p.T();

  // Grid nodes M, M/2, M/4, ... while the division is exact.
  std::vector<int> nodes;
  for (int m = cfg.nodes; m >= 1; m /= 2) {
    nodes.insert(nodes.begin(), m);
    if (m % 2 != 0) break;
  }
  const double t0 = T * nodes.front() / cfg.nodes;
  const int count = static_cast<int>(nodes.size());
  const auto xi1_phi = xi1_exact_doubling(phi, t0, count, nl);
  const auto xi1_u0n = xi1_exact_doubling(u0n, t0, count, nl);

  SeriesOptions opt;
  opt.nonlinearity = nl;
  opt.record = nodes;
  const SeriesTable tab = build_series(u0n, cfg.J, T, q, opt);

  rep.background_hs = sobolev_norm(u0, cfg.s);
  const double data_dist = sobolev_norm(u0n - u0, cfg.s);
  const double R = p.R();
  const double a4d = std::pow(static_cast<double>(p.A), 4.0 * cfg.d);
  double best = -1.0;
  for (int k = 0; k < count; ++k) {
    const int m = nodes[static_cast<std::size_t>(k)];
    InflateRow row;
    row.t = T * m / cfg.nodes;
    const SparseSpectrum& xi0 = tab.term(0, m);
    const SparseSpectrum tail = cfg.J >= 2 ? partial_sum(tab, m, 2, cfg.J) : SparseSpectrum(cfg.d);
    row.xi0_hs = sobolev_norm(xi0, cfg.s);
    row.xi1_phi_hs = sobolev_norm(xi1_phi[k], cfg.s);
    row.xi1_diff_hs = sobolev_norm(xi1_u0n[k] - xi1_phi[k], cfg.s);
    row.tail_hs = sobolev_norm(tail, cfg.s);
    row.partial_sum_hs = sobolev_norm(xi0 + xi1_u0n[k] + tail, cfg.s);
    row.data_dist_hs = data_dist;
    row.tail_bound = row.t * row.t * std::pow(R, 5) * a4d * p.f();
    if (row.partial_sum_hs > best) {
      best = row.partial_sum_hs;
      rep.argmax_t = row.t;
    }
    rep.rows.push_back(row);
  }
  rep.dominance = rep.at_T().dominance_ratio() > 1.0;
  rep.data_close = data_dist < rep.background_hs / 10.0 + 0.1;
  return rep;
}

void write_csv(std::ostream& os, const InflateReport& rep, const CsvOptions& opt) {
  write_csv_preamble(os, opt);
  const InflationParams& p = rep.params;
  os << "# d=" << p.d << " s=" << num(p.s) << " n=" << p.n << " N=" << p.N << " A=" << p.A
     << " R=" << num(p.R()) << " T=" << num(p.T()) << " J=" << rep.config.J
     << " nodes=" << rep.config.nodes << " regime=" << regime_name(p.regime)
     << " wick=" << (rep.config.wick ? 1 : 0)
     << " background=" << rep.config.background.to_string() << '\n';
  for (const auto& e : rep.conditions.entries) {
    os << "# condition " << e.id << " log10_ratio=" << num(e.log10_ratio)
       << " pass=" << (e.pass ? 1 : 0) << (e.derived ? " derived" : "") << '\n';
  }
  os << "t,xi0_hs,xi1_phi_hs,xi1_diff_hs,tail_hs,partial_sum_hs,data_dist_hs,tail_bound,"
        "lower_bound,dominance_ratio\n";
  for (const auto& r : rep.rows) {
    const double lower = r.xi1_phi_hs - r.xi0_hs - r.xi1_diff_hs - r.tail_hs;
    os << num(r.t) << ',' << num(r.xi0_hs) << ',' << num(r.xi1_phi_hs) << ','
       << num(r.xi1_diff_hs) << ',' << num(r.tail_hs) << ',' << num(r.partial_sum_hs) << ','
       << num(r.data_dist_hs) << ',' << num(r.tail_bound) << ',' << num(lower) << ','
       << num(r.dominance_ratio()) << '\n';
  }
  os << "# background_hs=" << num(rep.background_hs) << " T=" << num(p.T())
     << " argmax_t=" << num(rep.argmax_t) << " dominance=" << (rep.dominance ? 1 : 0)
     << " data_close=" << (rep.data_close ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// sweep

SweepConfig SweepConfig::from(const Config& cfg) {
  SweepConfig c;
  c.axis = cfg.get("axis", c.axis);
  c.d = cfg.get_int("d", c.d);
  c.s = cfg.get_double("s", c.s);
  c.log2N = log2_of_N(cfg, c.log2N);
  c.A = cfg.get_int64("A", c.A);
  c.R = cfg.get_double("R", c.R);
  c.c = cfg.get_double("c", c.c);
  c.values = cfg.get_list("values", c.values);
  return c;
}

SweepReport run_scaling_sweep(const SweepConfig& cfg) {
  SweepReport rep;
  rep.config = cfg;
  std::vector<double> values = cfg.values;
  if (cfg.axis == "t") {
    if (values.empty()) values = {0.00125, 0.0025, 0.005, 0.01};
    rep.expected = 1.0;
    rep.tolerance = 0.05;
  } else if (cfg.axis == "R") {
    if (values.empty()) values = {1, 2, 4, 8};
    rep.expected = 3.0;
    rep.tolerance = 1e-10;
  } else if (cfg.axis == "A") {
    if (values.empty()) values = cfg.d == 1 ? std::vector<double>{16, 32, 64, 128}
                                            : std::vector<double>{4, 8, 12, 16};
    rep.expected = 2.0 * cfg.d + std::max(cfg.d / 2.0 + cfg.s, 0.0);
    rep.tolerance = 0.15;
  } else {
    throw ConfigError("sweep: axis must be t, R or A, got '" + cfg.axis + "'");
  }
  if (values.size() < 4) throw ConfigError("sweep: need at least 4 points on the axis");
  const std::int64_t N = checked_pow2(cfg.log2N, "sweep");
  const double inv_n2 = 1.0 / (static_cast<double>(N) * static_cast<double>(N));

  rep.points.resize(values.size());
  parallel_points(values.size(), [&](std::size_t i) {
    const double v = values[i];
    std::int64_t A = cfg.A;
    double R = cfg.R;
    double t = cfg.c * inv_n2;
    if (cfg.axis == "t") {
      t = v * inv_n2;
    } else if (cfg.axis == "R") {
      R = v;
    } else {
      A = static_cast<std::int64_t>(v);
      if (static_cast<double>(A) != v) throw ConfigError("sweep: A values must be integers");
    }
    if (!(t > 0.0) || !(R > 0.0)) throw ConfigError("sweep: t and R must be positive");
    const SparseSpectrum phi = build_phi_n(cfg.d, N, A, R);
    rep.points[i] = {cfg.axis == "t" ? t : v, sobolev_norm(xi1_exact(phi, t), cfg.s)};
  });

  std::vector<double> x, y;
  for (const auto& pt : rep.points) {
    x.push_back(std::log(pt.x));
    y.push_back(std::log(pt.norm_hs));
  }
  rep.fit = least_squares_slope(x, y);
  rep.ok = std::abs(rep.fit.slope - rep.expected) <= rep.tolerance;
  return rep;
}

void write_csv(std::ostream& os, const SweepReport& rep, const CsvOptions& opt) {
  write_csv_preamble(os, opt);
  const auto& c = rep.config;
  os << "# axis=" << c.axis << " d=" << c.d << " s=" << num(c.s) << " log2N=" << num(c.log2N)
     << " A=" << c.A << " R=" << num(c.R) << " c=" << num(c.c) << '\n';
  os << c.axis << ",xi1_hs\n";
  for (const auto& pt : rep.points) os << num(pt.x) << ',' << num(pt.norm_hs) << '\n';
  os << "# slope=" << num(rep.fit.slope) << " residual=" << num(rep.fit.residual)
     << " expected=" << num(rep.expected) << " tolerance=" << num(rep.tolerance)
     << " ok=" << (rep.ok ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// oracle-compare

OracleCompareConfig OracleCompareConfig::from(const Config& cfg) {
  OracleCompareConfig c;
  c.d = cfg.get_int("d", c.d);
  if (cfg.has("data")) c.data = BackgroundProfile::parse(cfg.get("data", ""));
  c.t_fraction = cfg.get_double("t_fraction", c.t_fraction);
  c.Jmax = cfg.get_int("Jmax", c.Jmax);
  c.nodes = cfg.get_int("nodes", c.nodes);
  c.K = cfg.get_int("K", c.K);
  c.dt = cfg.get_double("dt", c.dt);
  c.wick = cfg.get_bool("wick", c.wick);
  c.tolerance = cfg.get_double("tolerance", c.tolerance);
  return c;
}

OracleCompareReport run_oracle_compare(const OracleCompareConfig& cfg) {
  if (!(cfg.t_fraction > 0.0 && cfg.t_fraction <= 0.5)) {
    throw ConfigError("oracle-compare: t must not exceed half the lwp radius (t_fraction <= 0.5)");
  }
  if (cfg.Jmax < 0) throw ConfigError("oracle-compare: Jmax must be >= 0");
  OracleCompareReport rep;
  rep.config = cfg;
  const SparseSpectrum u0 = build_background(cfg.d, cfg.data);
  if (u0.empty()) throw ConfigError("oracle-compare: zero data");
  rep.t = cfg.t_fraction * lwp_radius(u0);
  const Nonlinearity nl = cfg.wick ? Nonlinearity::wick : Nonlinearity::cubic;

  const SparseSpectrum ref = evolve(u0, rep.t, StepperConfig{cfg.dt, cfg.wick}, cfg.K);
  const double ref_l2 = l2_norm(ref);
  const double m0 = l2_norm(u0);
  rep.mass_drift = std::abs(ref_l2 * ref_l2 - m0 * m0) / (m0 * m0);

  SeriesOptions opt;
  opt.nonlinearity = nl;
  opt.record = {cfg.nodes};
  const SeriesTable tab = build_series(u0, cfg.Jmax, rep.t, QuadratureSpec{cfg.nodes}, opt);
  SparseSpectrum sum(cfg.d);
  for (int J = 0; J <= cfg.Jmax; ++J) {
    sum = sum + tab.term(J, cfg.nodes);
    rep.rows.push_back({J, l2_norm(sum - ref) / ref_l2});
  }
  rep.monotone = true;
  for (std::size_t k = 1; k < rep.rows.size(); ++k) {
    rep.monotone = rep.monotone && rep.rows[k].rel_l2 < rep.rows[k - 1].rel_l2;
  }
  rep.within_tolerance = rep.rows.back().rel_l2 <= cfg.tolerance;
  rep.ok = rep.monotone && rep.within_tolerance;
  return rep;
}

void write_csv(std::ostream& os, const OracleCompareReport& rep, const CsvOptions& opt) {
  write_csv_preamble(os, opt);
  os << "# d=" << rep.config.d << " data=" << rep.config.data.to_string() << " t=" << num(rep.t)
     << " nodes=" << rep.config.nodes << " K=" << rep.config.K
     << " wick=" << (rep.config.wick ? 1 : 0) << '\n';
  os << "J,rel_l2\n";
  for (const auto& r : rep.rows) os << r.J << ',' << num(r.rel_l2) << '\n';
  os << "# mass_drift=" << num(rep.mass_drift) << " monotone=" << (rep.monotone ? 1 : 0)
     << " within_tolerance=" << (rep.within_tolerance ? 1 : 0) << '\n';
}

}  // namespace nls

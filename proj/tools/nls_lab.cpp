// nls_lab: command-line front end for the norm-inflation experiments.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 a check in the
// report failed, 3 a numerical guard or resource limit tripped.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nls/config.hpp"
#include "nls/errors.hpp"
#include "nls/experiments.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out;
  bool summary = false;
  bool no_timestamp = false;
};

void add_common(CLI::App* sub, CommonOptions& o) {
  sub->add_option("--config", o.config_path, "key=value configuration file");
  sub->add_option("--set", o.sets, "override one key (key=value), repeatable");
  sub->add_option("--out", o.out, "write the CSV report here");
  sub->add_flag("--summary", o.summary, "print a one-line key=value summary to stderr");
  sub->add_flag("--no-timestamp", o.no_timestamp, "omit the timestamp comment from the CSV");
}

nls::Config load_config(const CommonOptions& o) {
  nls::Config cfg;
  if (!o.config_path.empty()) cfg.load(o.config_path);
  for (const auto& s : o.sets) cfg.set(s);
  return cfg;
}

template <class Report>
void emit_csv(const CommonOptions& o, const Report& rep) {
  if (o.out.empty()) return;
  std::ofstream os(o.out);
  if (!os) throw nls::ConfigError("cannot write " + o.out);
  nls::write_csv(os, rep, nls::CsvOptions{!o.no_timestamp});
}

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void summary_line(const CommonOptions& o, const std::string& line) {
  if (o.summary) std::cerr << line << '\n';
}

int cmd_trees(const CommonOptions& o) {
  const nls::Config cfg = load_config(o);
  cfg.restrict_to({"jmax", "enumerate_max"}, "trees");
  const auto rep = nls::run_trees(cfg.get_int("jmax", 5), cfg.get_int("enumerate_max", 5));
  emit_csv(o, rep);
  std::cout << "  j  count  enumerated  bound_ratio\n";
  for (const auto& r : rep.rows) {
    std::printf("%3d %6llu %11s  %.4g\n", r.j, static_cast<unsigned long long>(r.count),
                r.enumerated < 0 ? "-" : std::to_string(r.enumerated).c_str(), r.bound_ratio);
  }
  summary_line(o, "subcommand=trees jmax=" + std::to_string(rep.rows.back().j) +
                      " ok=" + std::to_string(rep.ok));
  return rep.ok ? 0 : 2;
}

int cmd_verify_lemmas(const CommonOptions& o) {
  const nls::Config cfg = load_config(o);
  cfg.restrict_to({"jmax", "nodes", "t_fraction", "ceiling", "spread"}, "verify-lemmas");
  const auto rep = nls::run_verify_lemmas(nls::LemmaConfig::from(cfg));
  emit_csv(o, rep);
  double worst_spread = 0.0;
  for (const auto& f : rep.fits) {
    std::cout << f.estimate << " [" << f.family << "] constants";
    for (double c : f.constants) std::cout << ' ' << g(c);
    std::cout << "  spread " << g(f.spread) << (f.ok ? "" : "  FAIL") << '\n';
    worst_spread = std::max(worst_spread, f.spread);
  }
  std::cout << "single-mode ratio " << g(rep.single_mode_ratio) << ", zero-background diff "
            << g(rep.zero_background_diff) << '\n';
  for (const auto& c : rep.convolution) {
    std::cout << "convolution d=" << c.d << " A=" << c.A << " min ratio " << g(c.min_ratio) << '\n';
  }
  summary_line(o, "subcommand=verify-lemmas worst_spread=" + g(worst_spread) +
                      " single_mode_ratio=" + g(rep.single_mode_ratio) +
                      " ok=" + std::to_string(rep.ok));
  return rep.ok ? 0 : 2;
}

int cmd_xi1_bound(const CommonOptions& o) {
  const nls::Config cfg = load_config(o);
  cfg.restrict_to({"d", "s", "n", "N", "c", "R"}, "xi1-bound");
  const auto rep = nls::run_xi1_bound(nls::Xi1BoundConfig::from(cfg));
  emit_csv(o, rep);
  std::cout << "     N      A   ratio  min_cube  max|t w|  min ReK/t\n";
  for (const auto& r : rep.rows) {
    std::printf("%6lld %6lld %7.4f %9.4f %9.4f %10.6f\n", static_cast<long long>(r.N),
                static_cast<long long>(r.A), r.ratio, r.min_cube_ratio, r.max_abs_phase,
                r.min_re_kernel);
  }
  summary_line(o, "subcommand=xi1-bound ratio_min=" + g(rep.ratio_min) +
                      " ratio_max=" + g(rep.ratio_max) + " band_ok=" +
                      std::to_string(rep.band_ok) + " phase_ok=" + std::to_string(rep.phase_ok));
  return rep.ok ? 0 : 2;
}

int cmd_inflate(const CommonOptions& o) {
  const nls::Config cfg = load_config(o);
  cfg.restrict_to({"n", "d", "s", "N", "log2N", "J", "nodes", "background", "wick", "margin"},
                  "inflate");
  const auto rep = nls::run_inflate(nls::InflateConfig::from(cfg));
  emit_csv(o, rep);
  const auto& p = rep.params;
  std::cout << nls::regime_name(p.regime) << " d=" << p.d << " s=" << p.s << " N=" << p.N
            << " A=" << p.A << " R=" << g(p.R()) << " T=" << g(p.T()) << '\n';
  std::cout << "           t      xi0   xi1(phi)  xi1 diff     tail  dominance\n";
  for (const auto& r : rep.rows) {
    std::printf("%12.5g %8.4g %10.4g %9.4g %8.4g %10.4f\n", r.t, r.xi0_hs, r.xi1_phi_hs,
                r.xi1_diff_hs, r.tail_hs, r.dominance_ratio());
  }
  std::cout << "data distance " << g(rep.at_T().data_dist_hs) << ", argmax t " << g(rep.argmax_t)
            << '\n';
  const int code = rep.exit_code();
  if (code != 0) std::cout << "inflate: " << rep.failure() << '\n';
  summary_line(o, "subcommand=inflate N=" + std::to_string(p.N) + " A=" + std::to_string(p.A) +
                      " T=" + g(p.T()) + " dominance_ratio=" + g(rep.at_T().dominance_ratio()) +
                      " data_dist=" + g(rep.at_T().data_dist_hs) +
                      " argmax_t=" + g(rep.argmax_t) +
                      " conditions=" + std::to_string(rep.conditions.all_pass()) +
                      " dominance=" + std::to_string(rep.dominance) +
                      " data_close=" + std::to_string(rep.data_close));
  return code;
}

int cmd_sweep(const CommonOptions& o) {
  const nls::Config cfg = load_config(o);
  cfg.restrict_to({"axis", "d", "s", "N", "log2N", "A", "R", "c", "values"}, "sweep");
  const auto rep = nls::run_scaling_sweep(nls::SweepConfig::from(cfg));
  emit_csv(o, rep);
  for (const auto& pt : rep.points) std::cout << g(pt.x) << "  " << g(pt.norm_hs) << '\n';
  std::cout << "slope " << rep.fit.slope << " +- " << rep.fit.residual << " (expected "
            << rep.expected << " +- " << rep.tolerance << ")\n";
  summary_line(o, "subcommand=sweep axis=" + rep.config.axis + " slope=" + g(rep.fit.slope) +
                      " residual=" + g(rep.fit.residual) + " ok=" + std::to_string(rep.ok));
  return rep.ok ? 0 : 2;
}

int cmd_oracle_compare(const CommonOptions& o) {
  const nls::Config cfg = load_config(o);
  cfg.restrict_to({"d", "data", "t_fraction", "Jmax", "nodes", "K", "dt", "wick", "tolerance"},
                  "oracle-compare");
  const auto rep = nls::run_oracle_compare(nls::OracleCompareConfig::from(cfg));
  emit_csv(o, rep);
  std::cout << "t = " << g(rep.t) << "\n  J  rel L2 error\n";
  for (const auto& r : rep.rows) std::printf("%3d  %.3e\n", r.J, r.rel_l2);
  std::cout << "mass drift " << g(rep.mass_drift) << '\n';
  summary_line(o, "subcommand=oracle-compare t=" + g(rep.t) +
                      " error=" + g(rep.rows.back().rel_l2) + " mass_drift=" +
                      g(rep.mass_drift) + " monotone=" + std::to_string(rep.monotone) +
                      " ok=" + std::to_string(rep.ok));
  return rep.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norm inflation lab for the cubic NLS on the torus"};
  app.require_subcommand(1);
  struct Entry {
    const char* name;
    const char* help;
    std::function<int(const CommonOptions&)> run;
  };
  const std::vector<Entry> commands = {
      {"trees", "count and enumerate ternary trees", cmd_trees},
      {"verify-lemmas", "fit constants of the multilinear estimates", cmd_verify_lemmas},
      {"xi1-bound", "lower bound for the first Picard correction", cmd_xi1_bound},
      {"inflate", "four-term decomposition of the inflating solution", cmd_inflate},
      {"sweep", "scaling exponents of the first correction", cmd_sweep},
      {"oracle-compare", "power series against the split-step solver", cmd_oracle_compare},
  };
  std::vector<CommonOptions> opts(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subs.push_back(app.add_subcommand(commands[i].name, commands[i].help));
    add_common(subs.back(), opts[i]);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  try {
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (subs[i]->parsed()) return commands[i].run(opts[i]);
    }
  } catch (const nls::NumericalGuard& e) {
    std::cerr << "numerical guard: " << e.what() << '\n';
    return 3;
  } catch (const nls::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

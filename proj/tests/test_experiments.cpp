#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "nls/config.hpp"
#include "nls/errors.hpp"
#include "nls/experiments.hpp"

using namespace nls;

namespace {

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

InflateConfig quick_inflate() {
  InflateConfig c;
  c.log2N = 5;
  c.nodes = 16;
  return c;
}

}  // namespace

TEST_CASE("config files") {
  Config cfg;
  std::istringstream is("# comment\nd = 2\ns=-0.5  # trailing\nN=32,64\n\nwick=true\n");
  cfg.parse(is);
  cfg.set("d=1");
  CHECK(cfg.get_int("d", 0) == 1);
  CHECK(cfg.get_double("s", 0.0) == -0.5);
  CHECK(cfg.get_list("N", {}) == std::vector<double>{32, 64});
  CHECK(cfg.get_bool("wick", false));
  CHECK(cfg.get("missing", "x") == "x");
  CHECK_NOTHROW(cfg.restrict_to({"d", "s", "N", "wick"}, "test"));
  CHECK_THROWS_AS(cfg.restrict_to({"d", "s"}, "test"), ConfigError);
  CHECK_THROWS_AS(cfg.set("novalue"), ConfigError);
  cfg.set("d", "two");
  CHECK_THROWS_AS(cfg.get_int("d", 0), ConfigError);
  std::istringstream bad("just words\n");
  CHECK_THROWS_AS(Config{}.parse(bad), ConfigError);
  CHECK_THROWS_AS(Config{}.load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("line fit") {
  const auto fit = least_squares_slope({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.residual < 1e-14);
  CHECK_THROWS_AS(least_squares_slope({1, 1}, {0, 2}), ConfigError);
}

TEST_CASE("trees report") {
  const auto rep = run_trees(3);
  CHECK(rep.ok);
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.rows[3].count == 12);
  CHECK(rep.rows[3].cross_checked);
  CHECK(run_trees(0).rows.at(0).count == 1);
  CHECK_THROWS_AS(run_trees(9), ResourceError);

  std::ostringstream a, b;
  write_csv(a, run_trees(5), CsvOptions{false});
  write_csv(b, run_trees(5), CsvOptions{false});
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind(kCsvHeader, 0) == 0);
  std::ostringstream c;
  write_csv(c, run_trees(1), CsvOptions{true});
  CHECK(c.str().find("# generated ") != std::string::npos);
}

TEST_CASE("xi1 bound inputs") {
  Xi1BoundConfig c;
  c.N = {32, 64};
  c.c = 0.05;
  CHECK_THROWS_AS(run_xi1_bound(c), ConfigError);
  c.c = 0.01;
  c.R = 0.0;
  const auto rep = run_xi1_bound(c);
  for (const auto& r : rep.rows) CHECK(r.norm_hs == 0.0);
  CHECK_FALSE(rep.band_ok);
}

TEST_CASE("sweep inputs") {
  SweepConfig c;
  c.values = {1, 2, 4};
  c.axis = "R";
  CHECK_THROWS_AS(run_scaling_sweep(c), ConfigError);
  c.axis = "q";
  CHECK_THROWS_AS(run_scaling_sweep(c), ConfigError);
  c.axis = "R";
  c.values = {1, 1.5, 2, 3, 5};
  const auto rep = run_scaling_sweep(c);
  CHECK(rep.ok);
  CHECK(rep.fit.slope == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("inflate report is self-consistent") {
  const auto rep = run_inflate(quick_inflate());
  REQUIRE(rep.rows.size() == 5);
  CHECK(rep.rows.back().t == doctest::Approx(rep.params.T()));
  CHECK(rep.exit_code() == 2);
  CHECK_FALSE(rep.failure().empty());

  std::ostringstream os;
  write_csv(os, rep, CsvOptions{false});
  const auto rows = csv_rows(os.str());
  REQUIRE(rows.size() == rep.rows.size());
  for (const auto& r : rows) {
    REQUIRE(r.size() == 10);
    const double lower = r[2] - r[1] - r[3] - r[4];
    CHECK(r[8] == doctest::Approx(lower));
    CHECK(r[9] == doctest::Approx(r[2] / (r[1] + r[3] + r[4])));
    // Triangle inequality: the partial sum norm is at least the lower bound.
    CHECK(r[5] >= lower - 1e-12);
  }
  CHECK((rows.back()[9] > 1.0) == rep.dominance);

  std::ostringstream again;
  write_csv(again, run_inflate(quick_inflate()), CsvOptions{false});
  CHECK(again.str() == os.str());
}

TEST_CASE("inflate from zero background") {
  auto c = quick_inflate();
  c.background = BackgroundProfile::zero();
  const auto rep = run_inflate(c);
  CHECK(rep.background_hs == 0.0);
  for (const auto& r : rep.rows) CHECK(r.xi1_diff_hs == 0.0);
  CHECK(rep.conditions.get("vi.a").pass);
}

TEST_CASE("inflate with the wick product") {
  InflateConfig c;
  c.d = 2;
  c.log2N = 3;
  c.nodes = 8;
  c.wick = true;
  c.J = 2;
  const auto rep = run_inflate(c);
  CHECK(rep.params.regime == Regime::case3);
  CHECK(rep.rows.size() == 4);
  CHECK(rep.at_T().xi1_phi_hs > 0.0);
}

TEST_CASE("oracle comparison") {
  OracleCompareConfig c;
  c.nodes = 64;
  c.Jmax = 3;
  const auto rep = run_oracle_compare(c);
  CHECK(rep.monotone);
  CHECK(rep.mass_drift < 1e-8);
  c.t_fraction = 0.8;
  CHECK_THROWS_AS(run_oracle_compare(c), ConfigError);
}

TEST_CASE("configs from key=value") {
  Config cfg;
  cfg.set("N=128");
  cfg.set("background=zero");
  cfg.set("wick=1");
  const auto ic = InflateConfig::from(cfg);
  CHECK(ic.log2N == 7);
  CHECK(ic.background.kind == BackgroundProfile::Kind::zero);
  CHECK(ic.wick);
  cfg.set("N=100");
  CHECK_THROWS_AS(InflateConfig::from(cfg), ConfigError);

  Config lc;
  lc.set("jmax=0");
  CHECK_THROWS_AS(LemmaConfig::from(lc), ConfigError);
  Config sc;
  sc.set("values=1,2,3,4");
  sc.set("axis=A");
  CHECK(SweepConfig::from(sc).values.size() == 4);
}

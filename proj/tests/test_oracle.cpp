#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nls/construction.hpp"
#include "nls/errors.hpp"
#include "nls/oracle.hpp"
#include "nls/series.hpp"
#include "support.hpp"

using namespace nls;

namespace {

const Complex kI{0.0, 1.0};

SparseSpectrum small_gaussian() {
  return build_background(1, BackgroundProfile::gaussian(0.5, 1.0));
}

}  // namespace

TEST_CASE("plane waves") {
  const auto w = SparseSpectrum::delta(LatticePoint{2}, 1.0);
  const double t = 0.1;
  const auto u = evolve(w, t, StepperConfig{1e-4, false}, 8);
  CHECK(std::abs(u(LatticePoint{2}) - std::exp(kI * (t * (4.0 + 1.0)))) < 1e-8);
  CHECK(fl_norm(u, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  const auto v = evolve(w, t, StepperConfig{1e-4, true}, 8);
  CHECK(std::abs(v(LatticePoint{2}) - std::exp(kI * (t * (4.0 - 1.0)))) < 1e-8);

  const auto w2 = SparseSpectrum::delta(LatticePoint{1, -1}, 0.5);
  const auto u2 = evolve(w2, t, StepperConfig{1e-4, false}, 4);
  CHECK(std::abs(u2(LatticePoint{1, -1}) - 0.5 * std::exp(kI * (t * (2.0 + 0.25)))) < 1e-8);
}

TEST_CASE("solver guards") {
  CHECK(evolve(SparseSpectrum(1), 0.3, StepperConfig{}, 8).empty());
  CHECK_THROWS_AS(evolve(SparseSpectrum::delta(LatticePoint{9}), 0.1, StepperConfig{}, 8), DomainError);
  // Large data pushes mass into the top third of a small grid.
  const auto big = build_background(1, BackgroundProfile::gaussian(6.0, 1.0));
  CHECK_THROWS_AS(evolve(big, 1.0, StepperConfig{}, 6), NumericalGuard);
}

TEST_CASE("mass conservation") {
  const auto u0 = test::random_spectrum(1, 5, 8, 3u, 0.3);
  const auto u = evolve(u0, 0.2, StepperConfig{}, 64);
  CHECK(l2_norm(u) == doctest::Approx(l2_norm(u0)).epsilon(1e-12));
}

TEST_CASE("split-step agrees with the power series") {
  const auto u0 = small_gaussian();
  const double t = 0.5 * lwp_radius(u0);
  const auto ref = evolve(u0, t, StepperConfig{}, 64);
  SeriesOptions opt;
  opt.record = {256};
  const auto tab = build_series(u0, 4, t, QuadratureSpec{256}, opt);
  double prev = kInfinity;
  for (int J = 0; J <= 4; ++J) {
    const double err = l2_norm(partial_sum(tab, 256, 0, J) - ref) / l2_norm(ref);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("picard iterates") {
  const auto u0 = small_gaussian();
  const double t = 0.5 * lwp_radius(u0);
  const QuadratureSpec q{64};
  CHECK(test::rel_fl1(picard_solve(u0, t, 0, q), propagate(u0, t)) == 0.0);

  SeriesOptions opt;
  opt.record = {64};
  const auto tab = build_series(u0, 4, t, q, opt);
  CHECK(test::rel_fl1(picard_solve(u0, t, 1, q), partial_sum(tab, 64, 0, 1)) < 1e-13);

  // P_4 and the series truncated at 4 differ by O(t^5).
  auto gap = [&](double tt) {
    const auto tb = build_series(u0, 4, tt, q, opt);
    return fl_norm(picard_solve(u0, tt, 4, q) - partial_sum(tb, 64), 1.0);
  };
  CHECK(gap(t) / gap(t / 2) >= 16.0);

  CHECK_THROWS_AS(picard_solve(u0, 2.0 * lwp_radius(u0), 2, q), DomainError);
  CHECK(picard_solve(SparseSpectrum(1), 0.1, 3, q).empty());
}

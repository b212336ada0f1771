#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nls/construction.hpp"
#include "nls/duhamel.hpp"
#include "nls/errors.hpp"
#include "nls/reference.hpp"
#include "support.hpp"

using namespace nls;

namespace {

const Complex kI{0.0, 1.0};

Evaluator flow(const SparseSpectrum& phi) {
  return [phi](double t) { return propagate(phi, t); };
}

SparseSpectrum two_mode() {
  return add_exact(SparseSpectrum::delta(LatticePoint{0}), SparseSpectrum::delta(LatticePoint{1}));
}

}  // namespace

TEST_CASE("resonance function") {
  const LatticePoint a{3, -1}, b{0, 2}, c{-4, 5};
  const auto ph = ResonancePhase::of(a, b, c);
  CHECK(ph.xi == a - b + c);
  CHECK(ph.omega == static_cast<double>(ph.xi.norm_squared() - a.norm_squared() +
                                        b.norm_squared() - c.norm_squared()));
  CHECK(resonance(a, b, c) == static_cast<std::int64_t>(ph.omega));
  CHECK(resonance(a, a, c) == 0);
  CHECK(resonance(a, c, c) == 0);
}

TEST_CASE("resonance kernel") {
  CHECK(resonance_kernel(0.0, 0.7) == Complex{0.7, 0.0});
  for (double w : {1e-9, 3e-5, 0.2, 7.0, -120.0, 4e4}) {
    for (double t : {1e-6, 1e-3, 0.5, 2.0}) {
      const Complex direct = (1.0 - std::exp(-kI * (t * w))) / (kI * w);
      const Complex k = resonance_kernel(w, t);
      CHECK(std::abs(k - direct) <= 1e-9 * std::max(t, std::abs(direct)));
    }
  }
}

TEST_CASE("trilinear product") {
  const Complex a{0.3, -1.1};
  const auto m = SparseSpectrum::delta(LatticePoint{4}, a);
  const auto out = trilinear_product(m, m, m);
  REQUIRE(out.size() == 1);
  CHECK(std::abs(out(LatticePoint{4}) - std::norm(a) * a) < 1e-15);

  const auto d1 = SparseSpectrum::delta(LatticePoint{1});
  const auto d0 = SparseSpectrum::delta(LatticePoint{0});
  const auto p = trilinear_product(d1, d0, d1);
  REQUIRE(p.size() == 1);
  CHECK(p(LatticePoint{2}) == Complex{1.0, 0.0});

  // 1_{Q_4} in every slot: out(0) counts triples in Q_4 with xi1 - xi2 + xi3 = 0.
  const auto q = cube_indicator(LatticePoint{0}, 4);
  CHECK(trilinear_product(q, q, q)(LatticePoint{0}).real() == doctest::Approx(12.0));
  for (const auto& e : q) CHECK(trilinear_product(q, q, q)(e.xi).real() >= 0.5 * 0.5 * 16);

  for (int d = 1; d <= 2; ++d) {
    const auto f1 = test::random_spectrum(d, 6, 20, 3u + d);
    const auto f2 = test::random_spectrum(d, 8, 15, 5u + d);
    const auto f3 = test::random_spectrum(d, 5, 18, 7u + d);
    CHECK(test::rel_fl1(trilinear_product(f1, f2, f3), reference::trilinear_product(f1, f2, f3)) <
          1e-13);
  }
}

TEST_CASE("wick product") {
  const Complex a{0.8, 0.6};
  const auto m = SparseSpectrum::delta(LatticePoint{-2, 1}, a);
  const auto out = wick_trilinear_product(m, m, m);
  CHECK(std::abs(out(LatticePoint{-2, 1}) + std::norm(a) * a) < 1e-15);

  for (int d = 1; d <= 2; ++d) {
    const auto f1 = test::random_spectrum(d, 5, 20, 13u + d);
    const auto f2 = test::random_spectrum(d, 5, 20, 15u + d);
    const auto f3 = test::random_spectrum(d, 5, 20, 17u + d);
    const auto w = wick_trilinear_product(f1, f2, f3);
    CHECK(test::rel_fl1(w, reference::wick_trilinear_product(f1, f2, f3)) < 1e-13);
    CHECK(fl_norm(w, 1.0) <= fl_norm(f1, 1.0) * fl_norm(f2, 1.0) * fl_norm(f3, 1.0));
  }

  // On the inflation data the exclusions never reach the low cube.
  const auto phi = build_phi_n(1, 32, 8, 1.0);
  const auto full = trilinear_product(phi, phi, phi);
  const auto wick = wick_trilinear_product(phi, phi, phi);
  for (const auto& e : cube_indicator(LatticePoint{0}, 8)) {
    CHECK(std::abs(full(e.xi) - wick(e.xi)) < 1e-12);
  }
}

TEST_CASE("duhamel integral") {
  const auto phi = two_mode();
  const QuadratureSpec q{64};
  CHECK(duhamel_integral(flow(phi), flow(phi), flow(phi), 0.0, q).empty());

  const Complex a{0.5, 0.2};
  const auto m = SparseSpectrum::delta(LatticePoint{3}, a);
  const double t = 0.4;
  const auto r = duhamel_integral(flow(m), flow(m), flow(m), t, q);
  const Complex expect = kI * t * std::norm(a) * a * std::exp(kI * (9.0 * t));
  CHECK(std::abs(r(LatticePoint{3}) - expect) < 1e-14);

  const auto s = duhamel_integral(flow(phi), flow(phi), flow(phi), 0.1, QuadratureSpec{1024});
  CHECK(std::abs(s(LatticePoint{2})) == doctest::Approx(std::sin(0.1)).epsilon(1e-6));
  CHECK_THROWS(QuadratureSpec{1}.validate());
}

TEST_CASE("closed-form first iterate") {
  const Complex a{-0.7, 0.4};
  const double t = 0.3;
  const auto m = SparseSpectrum::delta(LatticePoint{2, 2}, a);
  const auto x = xi1_exact(m, t);
  CHECK(std::abs(x(LatticePoint{2, 2}) - kI * t * std::norm(a) * a * std::exp(kI * (8.0 * t))) <
        1e-15);
  CHECK(std::abs(xi1_exact(two_mode(), 0.1)(LatticePoint{2})) ==
        doctest::Approx(std::sin(0.1)).epsilon(1e-14));
  CHECK(xi1_exact(SparseSpectrum(1), 0.5).empty());
  CHECK_THROWS_AS(xi1_exact(m, -1.0), DomainError);

  // The quadrature converges to the closed form at second order.
  const auto phi = build_phi_n(1, 8, 2, 1.0);
  const auto exact = xi1_exact(phi, 1e-3);
  const double e1 =
      fl_norm(exact - duhamel_integral(flow(phi), flow(phi), flow(phi), 1e-3, QuadratureSpec{512}), 1.0);
  const double e2 =
      fl_norm(exact - duhamel_integral(flow(phi), flow(phi), flow(phi), 1e-3, QuadratureSpec{1024}), 1.0);
  CHECK(e1 / e2 > 3.5);
}

TEST_CASE("closed form matches the serial reference") {
  for (auto nl : {Nonlinearity::cubic, Nonlinearity::wick}) {
    for (int d = 1; d <= 2; ++d) {
      const auto phi = test::random_spectrum(d, 7, 25, 41u + d);
      for (double t : {1e-5, 0.02, 0.9}) {
        Xi1Stats st;
        const auto x = xi1_exact(phi, t, nl, &st);
        CHECK(test::rel_fl1(x, reference::xi1_exact(phi, t, nl)) < 1e-12);
        CHECK(st.triples > 0);
      }
      const auto many = xi1_exact_doubling(phi, 0.01, 5, nl);
      REQUIRE(many.size() == 5);
      for (int k = 0; k < 5; ++k) {
        CHECK(test::rel_fl1(many[k], reference::xi1_exact(phi, 0.01 * (1 << k), nl)) < 1e-11);
      }
    }
  }
  // Long runs of consecutive frequencies use the phase recurrence.
  const auto phi = build_phi_n(1, 64, 40, 1.0);
  CHECK(test::rel_fl1(xi1_exact(phi, 2e-3), reference::xi1_exact(phi, 2e-3)) < 1e-11);
}

TEST_CASE("phase statistics") {
  const auto phi = build_phi_n(1, 32, 16, 1.0);
  const double t = 0.01 / (32.0 * 32.0);
  Xi1Stats st;
  xi1_exact(phi, t, Nonlinearity::cubic, &st);
  CHECK(st.triples == 32u * 32u * 32u);
  CHECK(st.max_abs_phase <= 12 * 0.01);
  CHECK(st.min_re_kernel >= 0.99);
}

TEST_CASE("tree evaluation") {
  const auto phi = two_mode();
  const QuadratureSpec q{256};
  const double t = 0.2;
  CHECK(test::rel_fl1(psi_eval(TernaryTree::leaf(), {phi}, t, q), propagate(phi, t)) < 1e-15);

  const auto t1 = enumerate_trees(1)[0];
  CHECK(test::rel_fl1(psi_eval(t1, {phi, phi, phi}, t, q), xi1_exact(phi, t)) < 1e-4);
  CHECK_THROWS_AS(psi_eval(t1, {phi, phi}, t, q), std::invalid_argument);

  // Each leaf enters linearly or conjugate linearly.
  const Complex c{0.3, 0.9};
  for (const auto& tree : enumerate_trees(2)) {
    const auto conj = leaf_conjugations(tree);
    REQUIRE(conj.size() == 5);
    const std::vector<SparseSpectrum> leaves(5, phi);
    const auto base = psi_eval(tree, leaves, t, q);
    for (std::size_t k = 0; k < 5; ++k) {
      auto scaled = leaves;
      scaled[k] = c * phi;
      const Complex factor = conj[k] ? std::conj(c) : c;
      CHECK(test::rel_fl1(psi_eval(tree, scaled, t, q), factor * base) < 1e-12);
    }
  }
}

TEST_CASE("local well-posedness radius") {
  const auto u = SparseSpectrum::delta(LatticePoint{0}, 2.0);
  CHECK(lwp_radius(u) == doctest::Approx(1.0 / 64.0));
  CHECK(lwp_radius(Complex{2.0} * u) == doctest::Approx(1.0 / 256.0));
  CHECK(std::isinf(lwp_radius(SparseSpectrum(1))));
}

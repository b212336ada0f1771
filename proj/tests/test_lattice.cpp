#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "nls/dense_box.hpp"
#include "nls/errors.hpp"
#include "nls/lattice.hpp"
#include "nls/reference.hpp"
#include "nls/spectrum_io.hpp"
#include "support.hpp"

using namespace nls;

namespace {

SparseSpectrum two_point() {
  return SparseSpectrum::from_entries(1, {{LatticePoint{0}, 3.0}, {LatticePoint{2}, Complex{0, -4}}});
}

}  // namespace

TEST_CASE("fourier-lebesgue norms") {
  const auto f = two_point();
  CHECK(fl_norm(f, 1.0) == doctest::Approx(7.0));
  CHECK(fl_norm(f, 2.0) == doctest::Approx(5.0));
  CHECK(fl_norm(f, kInfinity) == doctest::Approx(4.0));
  CHECK_THROWS_AS(fl_norm(f, 0.5), DomainError);
  CHECK(norm(f, NormSpec::fourier_lebesgue(1.0)) == doctest::Approx(7.0));
  CHECK(norm(f, NormSpec::l2()) == doctest::Approx(5.0));
}

TEST_CASE("sobolev norms") {
  CHECK(sobolev_norm(SparseSpectrum::delta(LatticePoint{0}, 2.0), -3.7) == doctest::Approx(2.0));
  CHECK(sobolev_norm(SparseSpectrum::delta(LatticePoint{3, 4}, 1.0), -1.0) ==
        doctest::Approx(1.0 / std::sqrt(26.0)));

  // Cubes at 8 and 16 of side 2: support {7, 8, 15, 16}.
  std::vector<SparseSpectrum::Entry> e;
  for (int x : {7, 8, 15, 16}) e.push_back({LatticePoint{x}, 1.0});
  const auto phi = SparseSpectrum::from_entries(1, e);
  const double expect =
      std::sqrt(1 / std::sqrt(50.0) + 1 / std::sqrt(65.0) + 1 / std::sqrt(226.0) + 1 / std::sqrt(257.0));
  CHECK(sobolev_norm(phi, -0.5) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(norm(phi, NormSpec::sobolev(0.0)) == doctest::Approx(2.0));
  CHECK(bracket_weight(LatticePoint{1, 2}, 0.5) == doctest::Approx(std::sqrt(6.0)));
}

TEST_CASE("convolution of single modes and cubes") {
  const auto a = SparseSpectrum::delta(LatticePoint{2, -1}, Complex{1, 1});
  const auto b = SparseSpectrum::delta(LatticePoint{-5, 3}, Complex{0, 2});
  const auto c = convolve(a, b);
  REQUIRE(c.size() == 1);
  CHECK(c.entries()[0].xi == LatticePoint{-3, 2});
  CHECK(std::abs(c.entries()[0].value - Complex{-2, 2}) < 1e-15);

  const auto q4 = cube_indicator(LatticePoint{0}, 4);
  const auto qq = convolve(q4, q4);
  CHECK(qq(LatticePoint{0}).real() == doctest::Approx(3.0));
  double lo = 1e9;
  for (const auto& e : q4) lo = std::min(lo, qq(e.xi).real());
  CHECK(lo == doctest::Approx(2.0));
  CHECK(qq(LatticePoint{1}).real() == doctest::Approx(2.0));
}

TEST_CASE("convolution matches the map-based reference") {
  for (int d = 1; d <= 3; ++d) {
    const auto f = test::random_spectrum(d, 9, 40, 11u + d);
    const auto g = test::random_spectrum(d, 30, 25, 17u + d);
    CHECK(test::rel_fl1(convolve(f, g), reference::convolve(f, g)) < 1e-14);
    CHECK(test::rel_fl1(convolve(g, f), reference::convolve(f, g)) < 1e-14);
  }
  // Sparse supports far apart take the segmented path.
  const auto far = add_exact(cube_indicator(LatticePoint{1000}, 6), cube_indicator(LatticePoint{-70}, 4));
  CHECK(test::rel_fl1(convolve(far, far), reference::convolve(far, far)) < 1e-14);
  CHECK(convolve(SparseSpectrum(1), far).empty());
}

TEST_CASE("cube indicator support") {
  const auto c = cube_indicator(LatticePoint{0}, 2);
  REQUIRE(c.size() == 2);
  CHECK(c.entries()[0].xi == LatticePoint{-1});
  CHECK(c.entries()[1].xi == LatticePoint{0});

  const auto c2 = cube_indicator(LatticePoint{5, 0}, 2);
  CHECK(c2.size() == 4);
  for (int x : {4, 5}) {
    for (int y : {-1, 0}) CHECK(c2.contains(LatticePoint{x, y}));
  }

  const auto c3 = cube_indicator(LatticePoint{8}, 4, 2.0);
  CHECK(c3.size() == 4);
  CHECK(c3.contains(LatticePoint{6}));
  CHECK(c3.contains(LatticePoint{9}));
  CHECK(fl_norm(c3, 1.0) == doctest::Approx(8.0));
  CHECK_THROWS_AS(cube_indicator(LatticePoint{0}, 0), DomainError);
}

TEST_CASE("free flow") {
  const auto f = test::random_spectrum(2, 12, 30, 5u);
  CHECK(test::rel_fl1(propagate(f, 0.0), f) == 0.0);
  const auto g = propagate(SparseSpectrum::delta(LatticePoint{2}, Complex{0.5, 0.25}), std::numbers::pi / 4);
  CHECK(std::abs(g(LatticePoint{2}) - Complex{-0.5, -0.25}) < 1e-15);
  CHECK(fl_norm(propagate(f, 0.73), 1.0) == doctest::Approx(fl_norm(f, 1.0)).epsilon(1e-15));
  // Group property.
  CHECK(test::rel_fl1(propagate(propagate(f, 0.3), 0.4), propagate(f, 0.7)) < 1e-14);
}

TEST_CASE("reflection, arithmetic and inner product") {
  const auto f = SparseSpectrum::from_entries(1, {{LatticePoint{3}, Complex{1, 2}}});
  const auto r = reflect_conj(f);
  CHECK(r(LatticePoint{-3}) == Complex{1, -2});
  const auto z = f - f;
  CHECK(z.empty());
  const auto h = Complex{0, 1} * f + f;
  CHECK(h(LatticePoint{3}) == Complex{-1, 3});
  CHECK(inner_product(f, f) == Complex{5, 0});
  CHECK(support_radius(add_exact(f, r)) == 3);
  CHECK(support_radius(SparseSpectrum(2)) == 0);
}

TEST_CASE("truncation applies to convolution output") {
  const auto tiny = SparseSpectrum::delta(LatticePoint{1}, 1e-8);
  CHECK(convolve(tiny, tiny).empty());
  CHECK(add_exact(tiny, tiny).size() == 1);
}

TEST_CASE("dense boxes") {
  const auto f = add_exact(cube_indicator(LatticePoint{2, 3}, 2), cube_indicator(LatticePoint{-4, 0}, 2));
  const LatticeBox b = bounding_box(f);
  CHECK(b.lo[0] == -5);
  CHECK(b.extent[0] == 8);
  CHECK(b.volume() == 8u * 5u);
  for (const auto& e : f) {
    CHECK(b.contains(e.xi));
    CHECK(b.point_at(static_cast<std::size_t>(b.offset(e.xi, b.strides()))) == e.xi);
  }
  const LatticeBox s = minkowski_sum(b, b);
  CHECK(s.lo[0] == -10);
  CHECK(s.extent[0] == 15);
}

TEST_CASE("spectrum files round trip") {
  const auto f = test::random_spectrum(3, 5, 20, 99u);
  std::stringstream ss;
  write_spectrum(ss, f);
  const auto g = read_spectrum(ss);
  REQUIRE(g.size() == f.size());
  CHECK(g.dim() == 3);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(g.entries()[i].xi == f.entries()[i].xi);
    CHECK(g.entries()[i].value == f.entries()[i].value);
  }
  std::stringstream bad("# d=2\n1 2\n");
  CHECK_THROWS(read_spectrum(bad));
}

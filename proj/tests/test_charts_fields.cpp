// Chart geometry, deterministic sampling, scalar-field reality and gradient
// bookkeeping, and the bitmask coefficient store of differential forms.
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "prequant/form.hpp"

using namespace prequant;

TEST_CASE("model charts expose the expected geometry", "[chart]") {
  const Chart sph = Chart::sphere_cyl();
  REQUIRE(sph.dim() == 2);
  REQUIRE(sph.is_periodic(0));
  REQUIRE_FALSE(sph.is_periodic(1));
  REQUIRE(sph.coord(1).lo == -1.0);
  REQUIRE(sph.coord(1).hi == 1.0);
  REQUIRE(sph.coord(1).exclusion == 1e-3);
  REQUIRE(sph.compact());

  const Chart tor = Chart::torus();
  REQUIRE(tor.dim() == 2);
  REQUIRE(tor.is_periodic(0));
  REQUIRE(tor.is_periodic(1));
  REQUIRE(tor.compact());

  const Chart dsk = Chart::disk();
  REQUIRE(dsk.dim() == 2);
  REQUIRE(dsk.is_ball());
  REQUIRE(dsk.ball_radius() == 1.0);
  REQUIRE_FALSE(dsk.compact());
  REQUIRE(Chart::disk(4, 0.5).dim() == 4);

  REQUIRE(Chart::circle().dim() == 1);
  REQUIRE(Chart::circle().compact());

  REQUIRE_THROWS_AS(Chart::disk(3), ConfigError);
  REQUIRE_THROWS_AS(Chart::sphere_cyl(0.0), ConfigError);
}

TEST_CASE("periodic reduction and shortest displacement", "[chart]") {
  const Chart sph = Chart::sphere_cyl();
  const Coords r = sph.reduce(Coords{kTwoPi + 0.3, 0.5});
  REQUIRE(r[0] == Catch::Approx(0.3).margin(1e-12));
  REQUIRE(r[1] == 0.5);

  // 6.2 and 0.1 are 0.18 apart going through the wrap, not 6.1.
  const Coords d = sph.displacement(Coords{6.2, 0.0}, Coords{0.1, 0.0});
  REQUIRE(d[0] == Catch::Approx(6.1 - kTwoPi).margin(1e-12));
  REQUIRE(d[1] == 0.0);

  // Non-periodic coordinates subtract plainly.
  const Coords dz = sph.displacement(Coords{0.0, 0.75}, Coords{0.0, -0.25});
  REQUIRE(dz[1] == Catch::Approx(1.0));
}

TEST_CASE("containment and the pole exclusion band are separate tests", "[chart]") {
  const Chart sph = Chart::sphere_cyl();
  REQUIRE(sph.contains(Coords{17.0, 0.2}));  // periodic coordinate never exits
  REQUIRE_FALSE(sph.contains(Coords{0.0, 1.01}));
  REQUIRE(sph.contains(Coords{0.0, 0.9995}));  // inside bounds ...
  REQUIRE(sph.in_exclusion_band(Coords{0.0, 0.9995}));  // ... but inside the band
  REQUIRE_FALSE(sph.in_exclusion_band(Coords{0.0, 0.99}));

  const Chart dsk = Chart::disk();
  REQUIRE(dsk.contains(Coords{0.6, 0.6}));
  REQUIRE_FALSE(dsk.contains(Coords{0.8, 0.8}));  // r > 1

  REQUIRE_THROWS_AS(make_point(sph, Coords{0.0, 2.0}), DomainError);
  REQUIRE(make_point(sph, Coords{1.0, 0.5}).coords[1] == 0.5);
}

TEST_CASE("sample clouds are deterministic and honor margins", "[chart]") {
  const Chart sph = Chart::sphere_cyl();
  const auto a = sph.sample_points(50, 7, 0.05);
  const auto b = sph.sample_points(50, 7, 0.05);
  const auto c = sph.sample_points(50, 8, 0.05);
  REQUIRE(a.size() == 50);
  double same = 0, other = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    same = std::max(same, (a[i] - b[i]).norm());
    other = std::max(other, (a[i] - c[i]).norm());
  }
  REQUIRE(same == 0.0);
  REQUIRE(other > 1e-3);
  for (const auto& p : a) {
    REQUIRE(sph.contains(p));
    REQUIRE(std::abs(p[1]) <= 1.0 - 1e-3 - 0.05 + 1e-12);
  }

  const Chart dsk = Chart::disk();
  for (const auto& p : dsk.sample_points(200, 3, 0.1))
    REQUIRE(p.norm() <= 0.9 + 1e-9);
}

TEST_CASE("scalar fields carry reality tags through arithmetic", "[field]") {
  const Chart sph = Chart::sphere_cyl();
  const auto pts = sph.sample_points(30, 2);

  const ScalarField f = ScalarField::real([](const Coords& p) { return std::cos(p[0]); });
  const ScalarField g = ScalarField::constant(Complex(0, 2));
  REQUIRE(f.reality() == Reality::real);
  REQUIRE(g.reality() == Reality::imaginary);
  REQUIRE((f * g).reality() == Reality::imaginary);
  REQUIRE((g * g).reality() == Reality::real);
  REQUIRE((f + f).reality() == Reality::real);
  REQUIRE((f + g).reality() == Reality::complex_any);
  REQUIRE(reality_violation(f, pts) == 0.0);
  REQUIRE(reality_violation(g, pts) == 0.0);

  const Complex v = (f * Complex(3, 0) + g)(Coords{0.0, 0.5});
  REQUIRE(v.real() == Catch::Approx(3.0));
  REQUIRE(v.imag() == Catch::Approx(2.0));
}

TEST_CASE("analytic gradients match central finite differences", "[field]") {
  const Chart sph = Chart::sphere_cyl();
  const ScalarField f = ScalarField::real(
      [](const Coords& p) { return std::sin(p[0]) * (1.0 - p[1] * p[1]); },
      [](const Coords& p) {
        return Coords{std::cos(p[0]) * (1.0 - p[1] * p[1]), -2.0 * p[1] * std::sin(p[0])};
      });
  REQUIRE(f.has_gradient());
  for (const auto& p : sph.sample_points(40, 5, 0.05)) {
    const Gradient a = f.analytic_gradient(p);
    const Gradient n = fd_gradient(f, sph, p);
    for (int i = 0; i < 2; ++i) REQUIRE(std::abs(a[i] - n[i]) < 1e-8);
  }

  // The combinators propagate gradients by the product rule.
  const ScalarField h = f * f + f * Complex(0.5, 0);
  REQUIRE(h.has_gradient());
  const Coords q{1.2, 0.3};
  const Gradient ag = h.analytic_gradient(q);
  const Gradient ng = fd_gradient(h, sph, q);
  for (int i = 0; i < 2; ++i) REQUIRE(std::abs(ag[i] - ng[i]) < 1e-8);

  // The FD fallback shifts its stencil inward at interval ends instead of
  // evaluating outside the chart.  The inward window estimates the slope at
  // its own midpoint, so at the wall the answer carries an O(h * f'') bias
  // -- here 2e-5 * 6 -- on top of the usual truncation error.
  const ScalarField bare =
      ScalarField::real([](const Coords& p) { return p[1] * p[1] * p[1]; });
  const Gradient edge = fd_gradient(bare, sph, Coords{0.0, 1.0});
  REQUIRE(std::abs(edge[1] - Complex(3.0, 0)) < 2e-4);
  const double step = kFdStep * 2.0;  // step at |z| = 1
  REQUIRE(std::abs(edge[1] - Complex(3.0 * (1.0 - step) * (1.0 - step), 0)) < 1e-8);
}

TEST_CASE("mask combinatorics give canonical antisymmetry signs", "[form]") {
  REQUIRE(mask_degree(0b0000) == 0);
  REQUIRE(mask_degree(0b1011) == 3);
  REQUIRE(insert_sign(0, 0b010) == 1);   // dx0 ^ dx1 already increasing
  REQUIRE(insert_sign(1, 0b001) == -1);  // dx1 ^ dx0 = -dx0^dx1
  REQUIRE(insert_sign(1, 0b010) == 0);   // repeated factor
  REQUIRE(merge_sign(0b001, 0b010) == 1);
  REQUIRE(merge_sign(0b010, 0b001) == -1);
  REQUIRE(merge_sign(0b011, 0b011) == 0);
  REQUIRE(merge_sign(0b011, 0b100) == 1);
  REQUIRE(merge_sign(0b100, 0b011) == 1);  // two transpositions, even
}

TEST_CASE("forms store coefficients against increasing multi-indices", "[form]") {
  const Chart sph = Chart::sphere_cyl();
  DifferentialForm a(sph, 1);
  REQUIRE(a.coeff(0b01) == nullptr);
  a.set(0b01, ScalarField::constant(Complex(2, 0)));
  REQUIRE(a.coefficient_value(0b01, Coords{0, 0}) == Complex(2, 0));
  REQUIRE(a.coefficient_value(0b10, Coords{0, 0}) == Complex(0, 0));
  REQUIRE(a.present_masks() == std::vector<Mask>{0b01});
  REQUIRE_THROWS_AS(a.set(0b11, ScalarField::constant(Complex(1, 0))), DegreeError);
  REQUIRE_THROWS_AS(DifferentialForm(sph, 4), DegreeError);

  DifferentialForm b(sph, 1);
  b.set(0b10, ScalarField::constant(Complex(0, 1)));
  const DifferentialForm s = a + b * Complex(2, 0);
  REQUIRE(s.coefficient_value(0b10, Coords{1, 0.5}) == Complex(0, 2));
  REQUIRE(s.reality() == Reality::complex_any);

  const auto pts = sph.sample_points(10, 1);
  REQUIRE(form_distance(s, s, pts) == 0.0);
  REQUIRE(s.sup_norm(pts) == Catch::Approx(2.0));
  REQUIRE_THROWS_AS(form_distance(a, DifferentialForm(Chart::torus(), 1), pts),
                    ChartMismatchError);
}

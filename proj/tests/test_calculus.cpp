// Exterior derivative, wedge, interior product, pullback, and the classical
// identities (d of d vanishes, Stokes on rectangles, pullback functoriality).
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "prequant/calculus.hpp"
#include "prequant/integrate.hpp"

using namespace prequant;

namespace {

// Random trig-polynomial scalar field on the cylinder chart:
//   f = sum over a few modes of c * cos(m theta + s) * z^q,
// with an optional analytic gradient assembled alongside.
ScalarField random_trig_field(UniformStream& rng, bool with_gradient) {
  struct Mode {
    double c, s;
    int m, q;
  };
  std::vector<Mode> modes;
  for (int i = 0; i < 3; ++i)
    modes.push_back({rng.next(-1.0, 1.0), rng.next(0.0, kTwoPi),
                     static_cast<int>(rng.next(0.0, 3.999)),
                     static_cast<int>(rng.next(0.0, 3.999))});
  auto value = [modes](const Coords& p) {
    double v = 0;
    for (const auto& mo : modes)
      v += mo.c * std::cos(mo.m * p[0] + mo.s) * std::pow(p[1], mo.q);
    return v;
  };
  if (!with_gradient) return ScalarField::real(value);
  return ScalarField::real(value, [modes](const Coords& p) {
    Coords g{0.0, 0.0};
    for (const auto& mo : modes) {
      g[0] += -mo.c * mo.m * std::sin(mo.m * p[0] + mo.s) * std::pow(p[1], mo.q);
      if (mo.q > 0)
        g[1] += mo.c * mo.q * std::cos(mo.m * p[0] + mo.s) * std::pow(p[1], mo.q - 1);
    }
    return g;
  });
}

}  // namespace

TEST_CASE("exterior derivative of z dtheta is dz^dtheta", "[calculus]") {
  const Chart sph = Chart::sphere_cyl();
  DifferentialForm a(sph, 1);
  a.set(0b01, ScalarField::real([](const Coords& p) { return p[1]; },
                                [](const Coords&) { return Coords{0.0, 1.0}; }));
  const DifferentialForm da = exterior_derivative(a);
  // dz ^ dtheta = -(dtheta ^ dz): coefficient -1 in the increasing basis.
  for (const auto& p : sph.sample_points(25, 3))
    REQUIRE(std::abs(da.coefficient_value(0b11, p) - Complex(-1, 0)) < 1e-12);
}

TEST_CASE("exterior derivative of (z-1) dtheta is dz^dtheta", "[calculus]") {
  const Chart sph = Chart::sphere_cyl();
  DifferentialForm a(sph, 1);
  a.set(0b01, ScalarField::real([](const Coords& p) { return p[1] - 1.0; }));
  const DifferentialForm da = exterior_derivative(a);  // finite differences here
  for (const auto& p : sph.sample_points(25, 4, 0.01))
    REQUIRE(std::abs(da.coefficient_value(0b11, p) - Complex(-1, 0)) < 1e-9);
}

TEST_CASE("d of an exact 1-form vanishes", "[calculus]") {
  const Chart sph = Chart::sphere_cyl();
  const ScalarField psi = ScalarField::real(
      [](const Coords& p) { return std::sin(p[0]) * (1.0 - p[1] * p[1]); },
      [](const Coords& p) {
        return Coords{std::cos(p[0]) * (1.0 - p[1] * p[1]), -2.0 * p[1] * std::sin(p[0])};
      });
  DifferentialForm f(sph, 0);
  f.set(0b00, psi);
  const DifferentialForm ddf = exterior_derivative(exterior_derivative(f));
  for (const auto& p : sph.sample_points(40, 5, 0.01))
    REQUIRE(std::abs(ddf.coefficient_value(0b11, p)) < 1e-8);
}

TEST_CASE("d of d stays small over random fields", "[calculus][property]") {
  const Chart sph = Chart::sphere_cyl();
  const auto pts = sph.sample_points(8, 17, 0.05);
  UniformStream rng(41);
  double worst_analytic = 0, worst_fd = 0;
  for (int trial = 0; trial < 40; ++trial) {
    DifferentialForm fa(sph, 0), fn(sph, 0);
    fa.set(0b00, random_trig_field(rng, true));
    fn.set(0b00, random_trig_field(rng, false));
    const DifferentialForm dda = exterior_derivative(exterior_derivative(fa));
    const DifferentialForm ddn = exterior_derivative(exterior_derivative(fn));
    for (const auto& p : pts) {
      worst_analytic = std::max(worst_analytic, std::abs(dda.coefficient_value(0b11, p)));
      worst_fd = std::max(worst_fd, std::abs(ddn.coefficient_value(0b11, p)));
    }
  }
  REQUIRE(worst_analytic <= 1e-6);
  REQUIRE(worst_fd <= 1e-4);
}

TEST_CASE("top-degree derivative is the empty form", "[calculus]") {
  const Chart sph = Chart::sphere_cyl();
  DifferentialForm w(sph, 2);
  w.set(0b11, ScalarField::constant(Complex(1, 0)));
  const DifferentialForm dw = exterior_derivative(w);
  REQUIRE(dw.degree() == 3);
  REQUIRE(dw.present_masks().empty());
}

TEST_CASE("wedge products carry the graded signs", "[calculus]") {
  const Chart sph = Chart::sphere_cyl();
  DifferentialForm dth(sph, 1), dz(sph, 1);
  dth.set(0b01, ScalarField::constant(Complex(1, 0)));
  dz.set(0b10, ScalarField::constant(Complex(1, 0)));

  const Coords p{0.7, 0.2};
  REQUIRE(wedge(dth, dz).coefficient_value(0b11, p) == Complex(1, 0));
  REQUIRE(wedge(dz, dth).coefficient_value(0b11, p) == Complex(-1, 0));
  REQUIRE(std::abs(wedge(dth, dth).coefficient_value(0b11, p)) == 0.0);

  // (f dtheta) ^ (g dz) with f = z, g = 2 -> 2z dtheta^dz.
  DifferentialForm f(sph, 1), g(sph, 1);
  f.set(0b01, ScalarField::real([](const Coords& q) { return q[1]; }));
  g.set(0b10, ScalarField::constant(Complex(2, 0)));
  REQUIRE(wedge(f, g).coefficient_value(0b11, p) == Complex(2 * 0.2, 0));

  // Degree-graded commutation for two 1-forms: a^b = -b^a.
  for (const auto& q : sph.sample_points(20, 6))
    REQUIRE(std::abs(wedge(f, g).coefficient_value(0b11, q) +
                     wedge(g, f).coefficient_value(0b11, q)) == 0.0);
}

TEST_CASE("interior product contracts the first slot", "[calculus]") {
  const Chart sph = Chart::sphere_cyl();
  DifferentialForm w(sph, 2);
  w.set(0b11, ScalarField::constant(Complex(1, 0)));  // dtheta ^ dz

  const Coords p{0.3, -0.4};
  const auto d_theta = [](const Coords&) { return Coords{1.0, 0.0}; };
  const auto d_z = [](const Coords&) { return Coords{0.0, 1.0}; };
  REQUIRE(interior_product(d_theta, w).coefficient_value(0b10, p) == Complex(1, 0));
  REQUIRE(interior_product(d_z, w).coefficient_value(0b01, p) == Complex(-1, 0));

  // X = a dtheta-direction + b dz-direction -> a dz - b dtheta.
  const double a = 1.7, b = -0.6;
  const auto X = [a, b](const Coords&) { return Coords{a, b}; };
  const DifferentialForm iw = interior_product(X, w);
  REQUIRE(iw.coefficient_value(0b10, p) == Complex(a, 0));
  REQUIRE(iw.coefficient_value(0b01, p) == Complex(-b, 0));
}

TEST_CASE("pullbacks respect identity, translation, and polar maps", "[calculus]") {
  const Chart sph = Chart::sphere_cyl();
  DifferentialForm w(sph, 2);
  w.set(0b11, ScalarField::real([](const Coords& p) { return 1.0 + 0.3 * p[1]; }));

  const auto pts = sph.sample_points(30, 9, 0.02);
  REQUIRE(form_distance(pullback_form(SmoothMap::identity(sph), w), w, pts) < 1e-12);

  const SmoothMap shift(sph, sph,
                        [](const Coords& p) { return Coords{p[0] + 1.234, p[1]}; },
                        [](const Coords&) { return Mat::identity(2); });
  REQUIRE(form_distance(pullback_form(shift, w), w, pts) < 1e-12);

  // Polar parametrization pulls dx^dy back to r dr^dt.
  const Chart dsk = Chart::disk();
  std::vector<CoordSpec> dims = {{CoordKind::interval, 0.05, 0.95, 0.0, "r"},
                                 {CoordKind::periodic, 0.0, kTwoPi, 0.0, "t"}};
  const Chart polar = Chart::parameter_box(dims);
  const SmoothMap to_xy(polar, dsk,
                        [](const Coords& p) {
                          return Coords{p[0] * std::cos(p[1]), p[0] * std::sin(p[1])};
                        });
  DifferentialForm area(dsk, 2);
  area.set(0b11, ScalarField::constant(Complex(1, 0)));
  const DifferentialForm pulled = pullback_form(to_xy, area);
  for (const auto& p : polar.sample_points(40, 11))
    REQUIRE(std::abs(pulled.coefficient_value(0b11, p) - Complex(p[0], 0)) < 1e-7);
}

TEST_CASE("pullback is functorial under composition", "[calculus][property]") {
  const Chart sph = Chart::sphere_cyl();
  const SmoothMap m1(sph, sph, [](const Coords& p) {
    return Coords{p[0] + 0.4 * std::sin(p[0]), 0.8 * p[1]};
  });
  const SmoothMap m2(sph, sph, [](const Coords& p) {
    return Coords{p[0] + 1.0, p[1] + 0.1 * (1.0 - p[1] * p[1])};
  });
  DifferentialForm w(sph, 2);
  w.set(0b11, ScalarField::real(
                  [](const Coords& p) { return 1.0 + 0.2 * std::cos(p[0]) + 0.3 * p[1]; }));

  const DifferentialForm direct = pullback_form(SmoothMap::compose(m2, m1), w);
  const DifferentialForm staged = pullback_form(m1, pullback_form(m2, w));
  REQUIRE(form_distance(direct, staged, sph.sample_points(40, 13, 0.05)) < 1e-8);
}

TEST_CASE("Stokes holds on coordinate rectangles", "[calculus][property]") {
  const Chart sph = Chart::sphere_cyl();
  DifferentialForm a(sph, 1);
  a.set(0b01, ScalarField::real(
                  [](const Coords& p) { return p[1] * p[1] * p[1] * std::cos(p[0]); },
                  [](const Coords& p) {
                    return Coords{-p[1] * p[1] * p[1] * std::sin(p[0]),
                                  3.0 * p[1] * p[1] * std::cos(p[0])};
                  }));
  a.set(0b10, ScalarField::real(
                  [](const Coords& p) { return std::sin(2 * p[0]) * (1.0 - p[1] * p[1]); },
                  [](const Coords& p) {
                    return Coords{2.0 * std::cos(2 * p[0]) * (1.0 - p[1] * p[1]),
                                  -2.0 * p[1] * std::sin(2 * p[0])};
                  }));
  const DifferentialForm da = exterior_derivative(a);

  UniformStream rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const double t0 = rng.next(0.0, 3.0), t1 = t0 + rng.next(0.5, 2.5);
    const double z0 = rng.next(-0.9, 0.0), z1 = z0 + rng.next(0.2, 0.85);
    const Complex inner = integrate_form(da, Region::box(sph, {{t0, t1}, {z0, z1}}));
    // Counterclockwise boundary in the (theta, z) plane.
    const Complex boundary = integrate_segment(a, Coords{t0, z0}, Coords{t1, z0}) +
                             integrate_segment(a, Coords{t1, z0}, Coords{t1, z1}) +
                             integrate_segment(a, Coords{t1, z1}, Coords{t0, z1}) +
                             integrate_segment(a, Coords{t0, z1}, Coords{t0, z0});
    REQUIRE(std::abs(inner - boundary) < 1e-6);
  }
}

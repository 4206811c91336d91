// Deformation vector fields, time-dependent flows with variational Jacobians,
// and normal-form charts.
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "prequant/darboux.hpp"

using namespace prequant;

namespace {

SymplecticForm constant_area_form(const Chart& chart, double c) {
  DifferentialForm w(chart, 2);
  w.set(0b11, ScalarField::constant(Complex(c, 0)));
  return SymplecticForm::checked(w);
}

}  // namespace

TEST_CASE("deformation field solves the pointwise linear system", "[flow]") {
  const Chart sph = Chart::sphere_cyl();
  const SymplecticForm w = constant_area_form(sph, 1.0);
  const MoserPath path = MoserPath::create(w, w);

  // Zero right-hand side gives the zero field.
  const DifferentialForm zero = DifferentialForm::zero(sph, 1);
  const Coords x0 = moser_vector_field(path, zero, 0.5, Coords{1.0, 0.3});
  REQUIRE(x0.norm() < 1e-14);

  // For the unit area form the matrix is [[0,1],[-1,0]], so
  // alpha = a dtheta + b dz solves to X = (-b, a).
  DifferentialForm alpha(sph, 1);
  alpha.set(0b01, ScalarField::constant(Complex(0.7, 0)));
  alpha.set(0b10, ScalarField::constant(Complex(-0.3, 0)));
  const Coords x = moser_vector_field(path, alpha, 0.0, Coords{2.0, -0.4});
  REQUIRE(x[0] == Catch::Approx(0.3).margin(1e-12));
  REQUIRE(x[1] == Catch::Approx(0.7).margin(1e-12));

  // Tangent vectors are real; a complex primitive is a hard error.
  DifferentialForm imag(sph, 1);
  imag.set(0b01, ScalarField::constant(Complex(0, 1)));
  REQUIRE_THROWS_AS(moser_vector_field(path, imag, 0.0, Coords{1.0, 0.2}), NumericalError);

  // A degenerate interpolant is rejected at the point of failure.
  DifferentialForm wz(sph, 2);
  wz.set(0b11, ScalarField::real([](const Coords& p) { return p[1]; }));
  const SymplecticForm wu = SymplecticForm::unchecked(wz);
  const MoserPath flat = MoserPath::create(wu, wu);
  REQUIRE_THROWS_AS(moser_vector_field(flat, alpha, 0.5, Coords{1.0, 0.0}),
                    DegenerateFormError);
}

TEST_CASE("zero deformation short-circuits to the exact identity", "[flow]") {
  const Chart sph = Chart::sphere_cyl();
  const SymplecticForm w = constant_area_form(sph, -1.0);
  const MoserPath path = MoserPath::create(w, w);
  const Primitive prim =
      Primitive::audited(DifferentialForm::zero(sph, 1), path.delta());
  const FlowMap flow = moser_flow(path, prim);

  REQUIRE(flow.is_identity());
  const Coords p{1.2, 0.4};
  REQUIRE(flow.chart().displacement(flow.forward(p), p).norm() == 0.0);
  REQUIRE(flow.jacobian(p).max_abs_diff(Mat::identity(2)) == 0.0);
  REQUIRE(pullback_residual(flow, path) < 1e-12);
  REQUIRE(invertibility_defect(flow) == 0.0);
}

TEST_CASE("flows reproduce closed-form trajectories and Jacobians", "[flow]") {
  const Chart dsk = Chart::disk();

  // Rigid rotation: X = (-y, x).  Time-one map is rotation by 1 radian.
  const FlowMap rot(dsk, [](double, const Coords& p) { return Coords{-p[1], p[0]}; }, 100);
  const Coords start{0.3, 0.0};
  const Coords end = rot.forward(start);
  REQUIRE(end[0] == Catch::Approx(0.3 * std::cos(1.0)).margin(1e-10));
  REQUIRE(end[1] == Catch::Approx(0.3 * std::sin(1.0)).margin(1e-10));

  Mat rotj(2, 2);
  rotj.at(0, 0) = std::cos(1.0);
  rotj.at(0, 1) = -std::sin(1.0);
  rotj.at(1, 0) = std::sin(1.0);
  rotj.at(1, 1) = std::cos(1.0);
  REQUIRE(rot.jacobian(start).max_abs_diff(rotj) < 1e-9);
  REQUIRE(rot.inverse_map().jacobian(end).max_abs_diff(rotj.transpose()) < 1e-9);

  // Diagonal linear field: Jacobian is exp of the rate matrix.
  const FlowMap stretch(
      dsk, [](double, const Coords& p) { return Coords{0.2 * p[0], -0.2 * p[1]}; }, 100);
  Mat expj(2, 2);
  expj.at(0, 0) = std::exp(0.2);
  expj.at(1, 1) = std::exp(-0.2);
  REQUIRE(stretch.jacobian(Coords{0.1, 0.2}).max_abs_diff(expj) < 1e-9);

  // Round trip through the inverse.
  const Coords q{0.25, -0.4};
  REQUIRE(dsk.displacement(rot.inverse(rot.forward(q)), q).norm() < 1e-10);

  // Leaving the chart aborts instead of clamping.
  const Chart sph = Chart::sphere_cyl();
  const FlowMap updrift(sph, [](double, const Coords&) { return Coords{0.0, 1.0}; }, 50);
  REQUIRE_THROWS_AS(updrift.forward(Coords{1.0, 0.5}), FlowEscapeError);
}

TEST_CASE("deformation flow normalizes a latitude-dependent area form", "[flow]") {
  const Chart sph = Chart::sphere_cyl();
  const double eps = 0.2;
  DifferentialForm w0(sph, 2), w1(sph, 2);
  w0.set(0b11, ScalarField::constant(Complex(-1, 0)));
  w1.set(0b11, ScalarField::real([eps](const Coords& p) {
    return -(1.0 + eps * 0.5 * (3 * p[1] * p[1] - 1));
  }));
  const MoserPath path =
      MoserPath::create(SymplecticForm::checked(w0), SymplecticForm::checked(w1));
  const Primitive prim = Primitive::audited(sphere_fiber_primitive(path.delta()), path.delta());
  REQUIRE(prim.residual < 1e-6);

  const FlowMap flow = moser_flow(path, prim, 200);
  REQUIRE_FALSE(flow.is_identity());
  REQUIRE(pullback_residual(flow, path) < 1e-6);
  REQUIRE(invertibility_defect(flow) < 1e-8);

  // The flow genuinely moves interior points (it is not a trivial pass).
  const Coords probe{0.7, 0.6};
  REQUIRE(sph.displacement(flow.forward(probe), probe).norm() > 1e-4);
}

TEST_CASE("deformation flow handles a tilted area form on the ball", "[flow]") {
  const Chart dsk = Chart::disk();
  DifferentialForm w0(dsk, 2), w1(dsk, 2);
  w0.set(0b11, ScalarField::constant(Complex(1, 0)));
  w1.set(0b11, ScalarField::real([](const Coords& p) { return 1.0 + 0.3 * p[0]; },
                                 [](const Coords&) {
                                   return Coords{0.3, 0.0};
                                 }));
  const MoserPath path =
      MoserPath::create(SymplecticForm::checked(w0), SymplecticForm::checked(w1));
  const Primitive prim = Primitive::audited(poincare_primitive(path.delta()), path.delta());
  REQUIRE(prim.residual < 1e-9);

  const FlowMap flow = moser_flow(path, prim, 200);
  REQUIRE(pullback_residual(flow, path, 100, 5, 0.15) < 1e-6);
  REQUIRE(invertibility_defect(flow, 50, 13, 0.15) < 1e-8);
}

TEST_CASE("normal-form chart is affine for constant forms", "[darboux]") {
  const Chart dsk = Chart::disk();
  const Coords p{0.1, 0.2};

  // Already standard: the chart is a pure translation.
  const SymplecticForm w1 = constant_area_form(dsk, 1.0);
  const SmoothMap m1 = darboux_chart(w1, p, 0.3);
  const Coords c1 = m1(Coords{0.0, 0.0});
  REQUIRE(dsk.displacement(c1, p).norm() < 1e-13);
  REQUIRE(m1.jacobian(Coords{0.0, 0.0}).max_abs_diff(Mat::identity(2)) < 1e-9);
  const DifferentialForm back1 = pullback_form(m1, w1.form());
  REQUIRE(back1.coefficient_value(0b11, Coords{0.05, -0.1}).real() ==
          Catch::Approx(1.0).margin(1e-9));

  // Scaled: the frame absorbs the constant, Jacobian is I/sqrt(c).
  const SymplecticForm w4 = constant_area_form(dsk, 4.0);
  const SmoothMap m4 = darboux_chart(w4, p, 0.3);
  REQUIRE(dsk.displacement(m4(Coords{0.0, 0.0}), p).norm() < 1e-13);
  Mat half = Mat::identity(2);
  half.at(0, 0) = 0.5;
  half.at(1, 1) = 0.5;
  REQUIRE(m4.jacobian(Coords{0.0, 0.0}).max_abs_diff(half) < 1e-9);
  const DifferentialForm back4 = pullback_form(m4, w4.form());
  REQUIRE(back4.coefficient_value(0b11, Coords{0.05, -0.1}).real() ==
          Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("normal-form chart flattens a variable area form", "[darboux]") {
  const Chart dsk = Chart::disk();
  DifferentialForm w(dsk, 2);
  w.set(0b11, ScalarField::real([](const Coords& p) { return 1.0 + 0.3 * p[0]; },
                                [](const Coords&) {
                                  return Coords{0.3, 0.0};
                                }));
  const SymplecticForm omega = SymplecticForm::checked(w);
  const Coords p{0.2, -0.1};
  const double radius = 0.25;
  const SmoothMap chart = darboux_chart(omega, p, radius);

  // Fixes the center point: the deformation vanishes there to second order.
  REQUIRE(dsk.displacement(chart(Coords{0.0, 0.0}), p).norm() < 1e-12);

  // Pulls the form back to the standard one on the interior of the ball.
  DifferentialForm standard(chart.source(), 2);
  standard.set(0b11, ScalarField::constant(Complex(1, 0)));
  const DifferentialForm back = pullback_form(chart, omega.form());
  const auto pts = chart.source().sample_points(200, 7, 0.1 * radius);
  REQUIRE(form_distance(back, standard, pts) < 1e-3);
}

TEST_CASE("over-ambitious normal-form radius fails loudly, halved succeeds",
          "[darboux]") {
  const Chart dsk = Chart::disk();
  DifferentialForm w(dsk, 2);
  w.set(0b11, ScalarField::real([](const Coords& p) { return 1.0 + 0.95 * p[0]; },
                                [](const Coords&) {
                                  return Coords{0.95, 0.0};
                                }));
  const SymplecticForm omega = SymplecticForm::checked(w);
  const Coords origin{0.0, 0.0};
  REQUIRE_THROWS_AS(darboux_chart(omega, origin, 0.95), ChartRadiusError);

  const SmoothMap chart = darboux_chart(omega, origin, 0.2);
  DifferentialForm standard(chart.source(), 2);
  standard.set(0b11, ScalarField::constant(Complex(1, 0)));
  REQUIRE(form_distance(pullback_form(chart, omega.form()), standard,
                        chart.source().sample_points(100, 7, 0.02)) < 1e-3);
}

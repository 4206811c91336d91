// Circle actions and Haar averaging of fields and forms.
#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "prequant/averaging.hpp"

using namespace prequant;

TEST_CASE("rotation actions compose like the group", "[averaging]") {
  const Chart sph = Chart::sphere_cyl();
  const CircleAction act = rotation_action(sph);
  const Coords p{1.0, 0.4};

  const Coords q = act(0.7)(p);
  REQUIRE(q[0] == Catch::Approx(1.7).margin(1e-14));
  REQUIRE(q[1] == Catch::Approx(0.4).margin(1e-14));
  // alpha_s after alpha_t = alpha_{s+t}, with wrap-around.
  const Coords r1 = act(4.0)(act(3.0)(p));
  const Coords r2 = act(7.0 - kTwoPi)(p);
  REQUIRE(sph.displacement(r1, r2).norm() < 1e-12);

  // Ball rotation is the rigid one, with an exact Jacobian.
  const Chart dsk = Chart::disk();
  const CircleAction rot = rotation_action(dsk);
  const Coords e1 = rot(kTwoPi / 4)(Coords{0.5, 0.0});
  REQUIRE(e1[0] == Catch::Approx(0.0).margin(1e-14));
  REQUIRE(e1[1] == Catch::Approx(0.5).margin(1e-14));
  REQUIRE(rot(0.3).jacobian(Coords{0.1, 0.1}).at(0, 1) ==
          Catch::Approx(-std::sin(0.3)).margin(1e-14));

  // Non-periodic axes are rejected.
  REQUIRE_THROWS_AS(rotation_action(sph, 1), ConfigError);
}

TEST_CASE("averaging kills oscillatory terms and keeps invariant ones", "[averaging]") {
  const Chart sph = Chart::sphere_cyl();
  const CircleAction act = rotation_action(sph);
  const auto pts = sph.sample_points(60, 17, 0.02);

  // Pure oscillation averages to zero.
  const ScalarField osc = ScalarField::real(
      [](const Coords& p) { return std::sin(p[0]) * (1 - p[1] * p[1]); });
  const ScalarField avg_osc = average_over_circle(act, osc);
  for (const auto& p : pts) REQUIRE(std::abs(avg_osc(p)) < 1e-12);

  // Invariant fields are fixed points of the average.
  const ScalarField inv =
      ScalarField::real([](const Coords& p) { return 1 - p[1] * p[1]; });
  const ScalarField avg_inv = average_over_circle(act, inv);
  for (const auto& p : pts)
    REQUIRE(std::abs(avg_inv(p) - inv(p)) < 1e-12);

  // Mixed field keeps exactly its rotation-invariant part.
  const ScalarField mixed = ScalarField::real(
      [](const Coords& p) { return (2.0 + std::cos(p[0])) * (1 - p[1] * p[1]); });
  const ScalarField avg_mixed = average_over_circle(act, mixed);
  for (const auto& p : pts)
    REQUIRE(avg_mixed(p).real() ==
            Catch::Approx(2.0 * (1 - p[1] * p[1])).margin(1e-12));
}

TEST_CASE("averaged fields carry exact chain-rule gradients", "[averaging]") {
  const Chart sph = Chart::sphere_cyl();
  const CircleAction act = rotation_action(sph);
  const ScalarField f = ScalarField::real(
      [](const Coords& p) { return (2.0 + std::cos(p[0])) * (1 - p[1] * p[1]); },
      [](const Coords& p) {
        return Coords{-std::sin(p[0]) * (1 - p[1] * p[1]),
                      (2.0 + std::cos(p[0])) * (-2 * p[1])};
      });
  const ScalarField avg = average_over_circle(act, f);
  REQUIRE(avg.has_gradient());
  const Coords p{0.9, 0.3};
  const auto g = avg.analytic_gradient(p);
  REQUIRE(std::abs(g[0]) < 1e-12);                                      // theta-independent
  REQUIRE(g[1].real() == Catch::Approx(2.0 * (-2 * 0.3)).margin(1e-12));
}

TEST_CASE("form averaging is idempotent and commutes with d", "[averaging]") {
  const Chart sph = Chart::sphere_cyl();
  const CircleAction act = rotation_action(sph);
  const auto pts = sph.sample_points(50, 19, 0.03);

  DifferentialForm beta(sph, 1);
  beta.set(0b01, ScalarField::real([](const Coords& p) {
    return std::cos(2 * p[0]) * p[1] + 0.5 * p[1] * p[1];
  }));
  beta.set(0b10, ScalarField::real([](const Coords& p) {
    return std::sin(p[0]) * (1 - p[1] * p[1]);
  }));

  const DifferentialForm avg = average_over_circle(act, beta);
  const DifferentialForm avg2 = average_over_circle(act, avg);
  REQUIRE(form_distance(avg2, avg, pts) < 1e-10);

  // The average is invariant under the action itself.
  REQUIRE(invariance_defect(act, avg, pts) < 1e-10);

  // d commutes with averaging.
  const DifferentialForm d_avg = exterior_derivative(avg);
  const DifferentialForm avg_d = average_over_circle(act, exterior_derivative(beta));
  REQUIRE(form_distance(d_avg, avg_d, pts) < 1e-7);

  // The oscillatory parts die; the invariant theta-coefficient survives.
  for (const auto& p : pts) {
    REQUIRE(avg.coefficient_value(0b01, p).real() ==
            Catch::Approx(0.5 * p[1] * p[1]).margin(1e-10));
    REQUIRE(std::abs(avg.coefficient_value(0b10, p)) < 1e-10);
  }
}

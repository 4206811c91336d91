#pragma once

#include <memory>

#include "prequant/symplectic.hpp"

namespace prequant {

namespace detail {

inline void require_closed(const DifferentialForm& f, double tol, const char* what) {
  const DifferentialForm df = exterior_derivative(f);
  const auto pts = f.chart().sample_points(50, 11);
  double r = 0;
  for (const auto& p : pts)
    for (Mask m = 0; m < 16; ++m)
      if (mask_degree(m) == df.degree()) r = std::max(r, std::abs(df.coefficient_value(m, p)));
  if (r > tol)
    throw NumericalError(std::string(what) + ": input form is not closed (sup |df| = " +
                         fmt_double(r) + ")");
}

}  // namespace detail

/// Radial-homotopy primitive on a star-shaped ball:
///   (H f)_J(x) = sum_i sign(i,J) x_i \int_0^1 t^{k-1} f_{iJ}(t x) dt,
/// so d(H f) = f for closed f.  Quadrature along each ray is Gauss-Legendre.
inline DifferentialForm poincare_primitive(const DifferentialForm& f, int ray_order = 64,
                                           double closed_tol = 1e-6) {
  const Chart& chart = f.chart();
  if (!chart.is_ball())
    throw DomainError("poincare_primitive: needs a star-shaped ball chart, got " + chart.name());
  const int k = f.degree();
  if (k < 1) throw DegreeError("poincare_primitive: degree must be >= 1");
  detail::require_closed(f, closed_tol, "poincare_primitive");

  DifferentialForm out(chart, k - 1);
  auto fc = std::make_shared<DifferentialForm>(f);
  for (Mask target = 0; target < 16; ++target) {
    if (mask_degree(target) != k - 1 || target >= (1u << chart.dim())) continue;
    struct Term {
      int sign;
      int axis;
      Mask source;
    };
    auto terms = std::make_shared<std::vector<Term>>();
    for (int i = 0; i < chart.dim(); ++i) {
      if (target & (1u << i)) continue;
      if (!f.coeff(target | (1u << i))) continue;
      terms->push_back({insert_sign(i, target), i, target | (1u << i)});
    }
    if (terms->empty()) continue;
    out.set(target, ScalarField(
                        [fc, terms, k, ray_order](const Coords& x) {
                          const auto& rule = gauss_legendre_on(0.0, 1.0, ray_order);
                          Complex s(0, 0);
                          for (size_t q = 0; q < rule.nodes.size(); ++q) {
                            const double t = rule.nodes[q];
                            const double tk = (k == 1) ? 1.0 : std::pow(t, k - 1);
                            const Coords tx = x * t;
                            Complex node(0, 0);
                            for (const auto& tm : *terms)
                              node += static_cast<double>(tm.sign) * x[tm.axis] *
                                      fc->coefficient_value(tm.source, tx);
                            s += rule.weights[q] * tk * node;
                          }
                          return s;
                        },
                        f.reality()));
  }
  return out;
}

/// Primitive of a 2-form g dtheta^dz on the cylinder chart with vanishing
/// total integral.  Splits g into its theta-average and the oscillatory rest:
///   alpha = G(z) dtheta + H(theta, z) dz,
///   G(z)  = -\int_{-1}^z mean_theta(g)  (Chebyshev antiderivative, so G is a
///           cheap closed-form evaluator with an exact z-derivative),
///   H     = \int_0^theta (g - mean_theta(g)) ds.
/// Then d(alpha) = g dtheta^dz and G vanishes at both poles, the second zero
/// being exactly the vanishing of the total integral.
inline DifferentialForm sphere_fiber_primitive(const DifferentialForm& f, int cheb_order = 64,
                                               int mean_nodes = 256, int theta_order = 64,
                                               double total_tol = 1e-8,
                                               double closed_tol = 1e-6) {
  const Chart& chart = f.chart();
  if (chart.name() != "sphere_cyl")
    throw DomainError("sphere_fiber_primitive: needs the cylinder chart, got " + chart.name());
  if (f.degree() != 2) throw DegreeError("sphere_fiber_primitive: needs a 2-form");
  detail::require_closed(f, closed_tol, "sphere_fiber_primitive");

  const Complex total = integrate_form(f, Region::box(chart));
  if (std::abs(total) > total_tol)
    throw CohomologyObstructionError(
        "sphere_fiber_primitive: nonzero total integral, no global primitive exists", total);

  const Mask tz = (1u << 0) | (1u << 1);
  auto g = std::make_shared<DifferentialForm>(f);

  // theta-average of the coefficient as a Chebyshev interpolant in z.
  const auto mean_rule = trapezoid_periodic(0.0, kTwoPi, mean_nodes);
  auto gbar = std::make_shared<ChebyshevInterpolant>(ChebyshevInterpolant::fit(
      [&](double z) {
        double s = 0;
        for (size_t i = 0; i < mean_rule.nodes.size(); ++i)
          s += g->coefficient_value(tz, Coords{mean_rule.nodes[i], z}).real();
        return s / mean_nodes;
      },
      -1.0, 1.0, cheb_order));

  auto G = std::make_shared<ChebyshevInterpolant>(gbar->antiderivative());
  auto Gp = std::make_shared<ChebyshevInterpolant>(G->derivative());

  DifferentialForm alpha(chart, 1);
  alpha.set(1u << 0, ScalarField(
                         [G](const Coords& p) { return Complex(-(*G)(p[1]), 0.0); },
                         Reality::real,
                         [Gp](const Coords& p) {
                           Gradient gr;
                           gr.n = p.size();
                           gr[0] = Complex(0, 0);
                           gr[1] = Complex(-(*Gp)(p[1]), 0.0);
                           return gr;
                         }));
  alpha.set(1u << 1, ScalarField(
                         [g, gbar, theta_order, tz](const Coords& p) {
                           // reduce theta; H is periodic since the oscillatory
                           // part has zero mean
                           double theta = p[0] - kTwoPi * std::floor(p[0] / kTwoPi);
                           if (theta == 0.0) return Complex(0, 0);
                           const double mean = (*gbar)(p[1]);
                           const auto rule = gauss_legendre_on(0.0, theta, theta_order);
                           Complex s(0, 0);
                           for (size_t i = 0; i < rule.nodes.size(); ++i)
                             s += rule.weights[i] *
                                  (g->coefficient_value(tz, Coords{rule.nodes[i], p[1]}) -
                                   Complex(mean, 0));
                           return s;
                         },
                         f.reality()));
  return alpha;
}

}  // namespace prequant

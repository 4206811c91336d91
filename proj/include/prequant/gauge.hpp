#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "prequant/connection.hpp"
#include "prequant/holonomy.hpp"
#include "prequant/integrate.hpp"
#include "prequant/path.hpp"

namespace prequant {

/// Gauge function: a scalar potential for a connection difference, pinned to
/// zero at a basepoint.  For hermitian pairs it is purely imaginary (up to
/// the numerical error the acceptance checks measure, never forced).
struct GaugeFunction {
  ScalarField phi;
  Point basepoint;
  bool hermitian = false;
  double path_disagreement = 0.0;
};

namespace detail {

/// Canonical two-family path systems from base to target, as straight
/// coordinate segments.  Family 0 is the defining family; family 1 is the
/// independent verification family.
///   ball:        0 = direct segment, 1 = polyline through the origin;
///   sphere_cyl:  0 = z-leg at fixed theta then theta-leg at fixed z,
///                1 = the two legs in the opposite order;
///   torus:       0 = theta1-leg then theta2-leg, 1 = opposite order.
/// Angular legs use the shortest representative of the displacement.
inline std::vector<std::pair<Coords, Coords>> canonical_segments(const Chart& chart,
                                                                 const Coords& base,
                                                                 const Coords& target,
                                                                 int family) {
  std::vector<std::pair<Coords, Coords>> segs;
  if (chart.is_ball()) {
    if (family == 0) {
      segs.push_back({base, target});
    } else {
      const Coords origin = Coords::zeros(chart.dim());
      segs.push_back({base, origin});
      segs.push_back({origin, target});
    }
    return segs;
  }
  const Coords disp = chart.displacement(target, base);
  std::vector<int> order;
  for (int i = 0; i < chart.dim(); ++i) order.push_back(i);
  if (chart.name() == "sphere_cyl") order = {1, 0};  // z first, then theta
  if (family == 1) {
    std::vector<int> rev(order.rbegin(), order.rend());
    order = rev;
  }
  Coords cur = base;
  for (int axis : order) {
    Coords nxt = cur;
    nxt[axis] += disp[axis];
    if (disp[axis] != 0.0) segs.push_back({cur, nxt});
    cur = nxt;
  }
  if (segs.empty()) segs.push_back({base, base});
  return segs;
}

inline Complex family_integral(const DifferentialForm& xi, const Chart& chart, const Coords& base,
                               const Coords& target, int family, int gl_order = 48) {
  Complex s(0, 0);
  for (const auto& [a, b] : canonical_segments(chart, base, target, family))
    s += integrate_segment(xi, a, b, gl_order);
  return s;
}

/// The loops generating H1 of the model chart: one latitude for the sphere
/// cylinder, both coordinate circles for fully periodic charts, nothing for
/// the simply connected ball.
inline std::vector<PathInChart> generator_loops(const Chart& chart) {
  std::vector<PathInChart> loops;
  if (chart.name() == "sphere_cyl") {
    loops.push_back(PathInChart::latitude(chart, 0.0));
  } else if (!chart.is_ball()) {
    const Coords origin = Coords::zeros(chart.dim());
    for (int i = 0; i < chart.dim(); ++i)
      if (chart.is_periodic(i)) loops.push_back(PathInChart::torus_loop(chart, i, origin));
  }
  return loops;
}

}  // namespace detail

/// Loop integrals of a connection difference.
inline std::vector<Complex> periods(const ConnectionDifference& xi,
                                    const std::vector<PathInChart>& loops) {
  std::vector<Complex> out;
  out.reserve(loops.size());
  for (const auto& loop : loops) {
    if (!loop.closed()) throw ConfigError("periods: all loops must be closed");
    out.push_back(path_integral(xi.xi, loop));
  }
  return out;
}

/// Integrate a closed difference xi up to the gauge function phi with
/// d(phi) = xi and phi(basepoint) = 0.  Probe-loop periods must vanish --
/// a surviving period is exactly the H1 obstruction of the underlying
/// theory and is reported as such.  Well-definedness is then verified by
/// comparing the two canonical path families at sample points.
inline GaugeFunction recover_gauge(const ConnectionDifference& xi, const Point& basepoint,
                                   const std::vector<PathInChart>& probe_loops = {},
                                   double period_tol = 1e-6, double path_tol = 1e-5,
                                   double closed_tol = 1e-6) {
  const Chart& chart = xi.xi.chart();
  chart.require_inside(chart.reduce(basepoint.coords), "recover_gauge basepoint");
  if (xi.closedness_residual > closed_tol)
    throw NumericalError("recover_gauge: xi is not closed (residual " +
                         fmt_double(xi.closedness_residual) + ")");

  const std::vector<PathInChart> loops =
      probe_loops.empty() ? detail::generator_loops(chart) : probe_loops;
  const std::vector<Complex> ps = periods(xi, loops);
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (std::abs(ps[i]) > period_tol)
      throw H1ObstructionError("recover_gauge: probe loop " + std::to_string(i) +
                                   " has period " + fmt_double(ps[i].real()) +
                                   (ps[i].imag() != 0 ? " + i*" + fmt_double(ps[i].imag()) : ""),
                               static_cast<int>(i), ps[i]);

  const DifferentialForm form = xi.xi;
  const Coords base = basepoint.coords;
  double disagreement = 0.0;
  for (const auto& p : chart.sample_points(32, 21, 0.01)) {
    const Complex a = detail::family_integral(form, chart, base, p, 0);
    const Complex b = detail::family_integral(form, chart, base, p, 1);
    disagreement = std::max(disagreement, std::abs(a - b));
  }
  if (disagreement > path_tol)
    throw PathDependenceError("recover_gauge: canonical path families disagree by " +
                                  fmt_double(disagreement),
                              disagreement);

  const Reality r = xi.hermitian_pair ? Reality::imaginary : Reality::complex_any;
  ScalarField phi(
      [form, chart, base](const Coords& p) {
        return detail::family_integral(form, chart, base, p, 0);
      },
      r);
  return GaugeFunction{std::move(phi), basepoint, xi.hermitian_pair, disagreement};
}

/// Map to the circle guaranteed by an integral-period closed difference:
/// t(p) = (integral of xi from basepoint to p) mod 2*pi, with t^*(dtheta)
/// reproducing xi.  Non-integral generator periods are the precondition
/// failure and report the nearest integral multiple.
inline SmoothMap circle_map(const ConnectionDifference& xi, const Point& basepoint,
                            double period_tol = 1e-6, double path_tol = 1e-5) {
  const Chart& chart = xi.xi.chart();
  for (const Complex p : periods(xi, detail::generator_loops(chart))) {
    const double n = std::round(p.real() / kTwoPi);
    const double defect = std::abs(p - Complex(kTwoPi * n, 0));
    if (defect > period_tol)
      throw NonIntegralPeriodError("circle_map: generator period " + fmt_double(p.real()) +
                                       " is not an integral multiple of 2*pi (nearest: " +
                                       fmt_double(kTwoPi * n) + ")",
                                   p);
  }

  const DifferentialForm form = xi.xi;
  const Coords base = basepoint.coords;
  double disagreement = 0.0;
  for (const auto& p : chart.sample_points(32, 22, 0.01)) {
    const Complex a = detail::family_integral(form, chart, base, p, 0);
    const Complex b = detail::family_integral(form, chart, base, p, 1);
    disagreement = std::max(
        disagreement, std::abs(std::exp(Complex(0, 1) * a) - std::exp(Complex(0, 1) * b)));
  }
  if (disagreement > path_tol)
    throw PathDependenceError("circle_map: path families disagree as unit complex numbers by " +
                                  fmt_double(disagreement),
                              disagreement);

  return SmoothMap(chart, Chart::circle(), [form, chart, base](const Coords& p) {
    const Complex v = detail::family_integral(form, chart, base, p, 0);
    return Coords{v.real()};
  });
}

/// Shift a connection by a gauge function: potentials move by the real
/// representative of -i d(phi) (exactly real when phi is imaginary, as the
/// hermitian case requires).  Curvature is unchanged because d(d phi) = 0.
inline PrequantumConnection apply_gauge(const PrequantumConnection& conn,
                                        const GaugeFunction& gauge) {
  if (conn.hermitian() && !gauge.hermitian)
    throw HermitianViolationError("apply_gauge: hermitian connection needs an imaginary gauge");
  DifferentialForm phi0(conn.chart(), 0);
  phi0.set(0, gauge.phi);
  DifferentialForm shift = exterior_derivative(phi0) * Complex(0, -1);
  if (conn.hermitian()) shift = real_part_form(shift);
  return conn.shifted(shift, conn.id() + "+gauge");
}

}  // namespace prequant

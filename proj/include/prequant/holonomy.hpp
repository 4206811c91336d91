#pragma once

#include <cmath>
#include <utility>

#include "prequant/connection.hpp"
#include "prequant/path.hpp"
#include "prequant/quadrature.hpp"

namespace prequant {

/// Line integral of a 1-form along a path, region data ignored.  Closed
/// single-piece loops use the periodic trapezoid rule, which converges
/// spectrally for smooth loops; everything else composites Gauss-Legendre
/// over the scheduled pieces.
inline Complex path_integral(const DifferentialForm& xi, const PathInChart& path,
                             int trap_nodes = 256, int gl_order = 64) {
  if (xi.degree() != 1) throw DegreeError("path_integral: needs a 1-form");
  if (xi.chart() != path.chart())
    throw ChartMismatchError("path_integral: form and path live on different charts");
  const int n = xi.chart().dim();
  auto integrand = [&](double t) {
    const Coords p = path.at(t);
    const Coords v = path.velocity(t);
    Complex s(0, 0);
    for (int i = 0; i < n; ++i) s += xi.coefficient_value(1u << i, p) * v[i];
    return s;
  };
  if (path.closed() && path.schedule().size() == 1) {
    const QuadratureRule rule = trapezoid_periodic(0.0, 1.0, trap_nodes);
    Complex s(0, 0);
    for (int j = 0; j < trap_nodes; ++j) s += integrand(rule.nodes[j]) * rule.weights[j];
    return s;
  }
  Complex s(0, 0);
  for (const auto& piece : path.schedule()) {
    const QuadratureRule rule = gauss_legendre_on(piece.t0, piece.t1, gl_order);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
      s += integrand(rule.nodes[j]) * rule.weights[j];
  }
  return s;
}

/// Holonomy of a closed path: hol = exp(i * sum of piecewise potential
/// integrals) times the frame-change phases.  Switching the trivialization
/// from region A to region B at a path point p multiplies the transported
/// component by exp(+i(Lambda_B - Lambda_A)(p)); if the schedule ends in a
/// different region than it starts, the final component is converted back at
/// the endpoint so the loop compares like with like.  Real potentials make
/// |hol| = 1 up to roundoff.
inline Complex holonomy(const PrequantumConnection& conn, const PathInChart& path,
                        int trap_nodes = 256, int gl_order = 64) {
  if (!path.closed()) throw ConfigError("holonomy: path must be closed");
  if (path.chart() != conn.chart())
    throw ChartMismatchError("holonomy: path chart is not the connection chart");

  const int n = conn.chart().dim();
  const auto& sched = path.schedule();
  Complex total(0, 0);
  Complex frame_factor(1, 0);
  const Complex iu(0, 1);

  for (std::size_t k = 0; k < sched.size(); ++k) {
    const DifferentialForm& alpha = conn.potential(sched[k].region);
    auto integrand = [&](double t) {
      const Coords p = path.at(t);
      const Coords v = path.velocity(t);
      Complex s(0, 0);
      for (int i = 0; i < n; ++i) s += alpha.coefficient_value(1u << i, p) * v[i];
      return s;
    };
    if (sched.size() == 1) {
      const QuadratureRule rule = trapezoid_periodic(0.0, 1.0, trap_nodes);
      for (int j = 0; j < trap_nodes; ++j) total += integrand(rule.nodes[j]) * rule.weights[j];
    } else {
      const QuadratureRule rule = gauss_legendre_on(sched[k].t0, sched[k].t1, gl_order);
      for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        total += integrand(rule.nodes[j]) * rule.weights[j];
    }
    if (k + 1 < sched.size() && sched[k + 1].region != sched[k].region) {
      const Coords p = path.at(sched[k].t1);  // raw coords keep the winding consistent
      const Complex dl =
          conn.log_phase(sched[k + 1].region)(p) - conn.log_phase(sched[k].region)(p);
      frame_factor *= std::exp(iu * dl);
    }
  }
  if (sched.back().region != sched.front().region) {
    const Coords p = path.at(1.0);
    const Complex dl =
        conn.log_phase(sched.front().region)(p) - conn.log_phase(sched.back().region)(p);
    frame_factor *= std::exp(iu * dl);
  }
  return std::exp(iu * total) * frame_factor;
}

}  // namespace prequant

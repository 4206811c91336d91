#pragma once

#include <functional>
#include <vector>

#include "prequant/calculus.hpp"
#include "prequant/quadrature.hpp"

namespace prequant {

/// Oriented integration domain: a parameter box (each axis an interval or a
/// full period) mapped smoothly into the target chart.  The orientation of
/// the domain is the order of the parameter axes.
///
/// Two conventions coexist deliberately:
///  - box() orients by chart coordinate order, so on the cylinder chart the
///    full box integral of dtheta^dz is +4*pi;
///  - full() is the canonical total-space region used for integrality and
///    index computations, orienting the cylinder as (z, theta) so that the
///    positively-oriented area form is dz^dtheta (and the torus as
///    (theta1, theta2), the disk by its polar parametrization).
class Region {
 public:
  int dim() const { return param_.dim(); }
  const Chart& param_chart() const { return param_; }
  const SmoothMap& map() const { return map_; }

  /// Axis-aligned box in chart coordinate order.  Empty bounds = full chart.
  static Region box(const Chart& chart,
                    std::vector<std::pair<double, double>> bounds = {}) {
    if (chart.is_ball() && bounds.empty())
      throw DomainError("box region: full ball charts use Region::ball or Region::full");
    std::vector<CoordSpec> dims;
    for (int i = 0; i < chart.dim(); ++i) {
      const auto& s = chart.coord(i);
      if (bounds.empty()) {
        dims.push_back({s.kind, s.lo, s.hi, 0.0, s.label});
      } else {
        auto [lo, hi] = bounds[i];
        const bool full_period = s.kind == CoordKind::periodic &&
                                 std::abs((hi - lo) - s.period()) < 1e-12;
        dims.push_back({full_period ? CoordKind::periodic : CoordKind::interval, lo, hi, 0.0,
                        s.label});
      }
    }
    Region r;
    r.param_ = Chart::parameter_box(dims);
    r.map_ = SmoothMap(r.param_, chart, [](const Coords& p) { return p; },
                       [n = chart.dim()](const Coords&) { return Mat::identity(n); });
    return r;
  }

  /// Canonical oriented total-space region (see class comment).
  static Region full(const Chart& chart) {
    if (chart.name() == "sphere_cyl") {
      std::vector<CoordSpec> dims = {
          {CoordKind::interval, chart.coord(1).lo, chart.coord(1).hi, 0.0, "z"},
          {CoordKind::periodic, chart.coord(0).lo, chart.coord(0).hi, 0.0, "theta"}};
      Region r;
      r.param_ = Chart::parameter_box(dims);
      r.map_ = SmoothMap(r.param_, chart,
                         [](const Coords& p) {
                           return Coords{p[1], p[0]};
                         },
                         [](const Coords&) {
                           Mat J(2, 2);
                           J.at(0, 1) = 1.0;
                           J.at(1, 0) = 1.0;
                           return J;
                         });
      return r;
    }
    if (chart.is_ball()) return ball(chart, chart.ball_radius());
    return box(chart);
  }

  /// Polar/spherical parametrization of a centered ball (2d charts).
  static Region ball(const Chart& chart, double radius) {
    if (!chart.is_ball()) throw DomainError("ball region: chart has no ball bound");
    if (chart.dim() != 2)
      throw DomainError("ball region: only 2-dimensional balls are integrated");
    std::vector<CoordSpec> dims = {{CoordKind::interval, 0.0, radius, 0.0, "r"},
                                   {CoordKind::periodic, 0.0, kTwoPi, 0.0, "t"}};
    Region r;
    r.param_ = Chart::parameter_box(dims);
    r.map_ = SmoothMap(r.param_, chart,
                       [](const Coords& p) {
                         return Coords{p[0] * std::cos(p[1]), p[0] * std::sin(p[1])};
                       },
                       [](const Coords& p) {
                         Mat J(2, 2);
                         J.at(0, 0) = std::cos(p[1]);
                         J.at(0, 1) = -p[0] * std::sin(p[1]);
                         J.at(1, 0) = std::sin(p[1]);
                         J.at(1, 1) = p[0] * std::cos(p[1]);
                         return J;
                       });
    return r;
  }

  /// Parametrized curve on [0,1]; closed curves integrate with the trapezoid
  /// rule (parameter treated as periodic), open ones with Gauss-Legendre.
  static Region curve(const Chart& chart, std::function<Coords(double)> gamma, bool closed,
                      std::function<Coords(double)> derivative = nullptr) {
    std::vector<CoordSpec> dims = {
        {closed ? CoordKind::periodic : CoordKind::interval, 0.0, 1.0, 0.0, "t"}};
    Region r;
    r.param_ = Chart::parameter_box(dims);
    SmoothMap::Eval eval = [gamma](const Coords& p) { return gamma(p[0]); };
    if (derivative) {
      r.map_ = SmoothMap(r.param_, chart, eval, [derivative, n = chart.dim()](const Coords& p) {
        const Coords d = derivative(p[0]);
        Mat J(n, 1);
        for (int i = 0; i < n; ++i) J.at(i, 0) = d[i];
        return J;
      });
    } else {
      r.map_ = SmoothMap(r.param_, chart, eval);
    }
    return r;
  }

 private:
  Chart param_;
  SmoothMap map_;
};

/// Integrate a k-form over a k-dimensional region: pull back along the region
/// map and apply a tensor-product rule (Gauss-Legendre on interval axes,
/// trapezoid on periodic ones).  Every node is checked against chart bounds.
inline Complex integrate_form(const DifferentialForm& f, const Region& region,
                              int gl_order = 32, int trapezoid_nodes = 256) {
  if (f.degree() != region.dim())
    throw DegreeError("integrate_form: form degree " + std::to_string(f.degree()) +
                      " != region dimension " + std::to_string(region.dim()));
  const Chart& target = f.chart();
  if (region.map().target() != target)
    throw ChartMismatchError("integrate_form: region maps into " +
                             region.map().target().name() + ", form lives on " + target.name());

  const DifferentialForm pulled = pullback_form(region.map(), f);
  const int n = region.dim();
  std::vector<QuadratureRule> rules;
  for (int i = 0; i < n; ++i) {
    const auto& s = region.param_chart().coord(i);
    if (s.kind == CoordKind::periodic)
      rules.push_back(trapezoid_periodic(s.lo, s.period(), trapezoid_nodes));
    else
      rules.push_back(gauss_legendre_on(s.lo, s.hi, gl_order));
  }

  const Mask top = lower_bits(n);
  Complex total(0, 0);
  std::vector<int> idx(n, 0);
  while (true) {
    Coords p = Coords::zeros(n);
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      p[i] = rules[i].nodes[idx[i]];
      w *= rules[i].weights[idx[i]];
    }
    const Coords image = target.reduce(region.map()(p));
    if (!target.contains(image))
      throw DomainError("integrate_form: region escapes chart bounds at " + image.str());
    total += w * pulled.coefficient_value(top, p);

    int carry = n - 1;
    while (carry >= 0) {
      if (++idx[carry] < static_cast<int>(rules[carry].nodes.size())) break;
      idx[carry] = 0;
      --carry;
    }
    if (carry < 0) break;
  }
  return total;
}

/// Line integral of a 1-form along the straight coordinate segment from a to
/// b (the basic step of the canonical path families).
inline Complex integrate_segment(const DifferentialForm& xi, const Coords& a, const Coords& b,
                                 int gl_order = 48) {
  if (xi.degree() != 1) throw DegreeError("integrate_segment: needs a 1-form");
  const Coords d = b - a;
  const auto rule = gauss_legendre_on(0.0, 1.0, gl_order);
  Complex total(0, 0);
  for (size_t k = 0; k < rule.nodes.size(); ++k) {
    const Coords p = a.axpy(rule.nodes[k], d);
    Complex v(0, 0);
    for (int i = 0; i < a.size(); ++i)
      if (d[i] != 0.0) v += xi.coefficient_value(1u << i, p) * d[i];
    total += rule.weights[k] * v;
  }
  return total;
}

}  // namespace prequant

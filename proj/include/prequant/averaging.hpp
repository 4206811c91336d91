#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "prequant/calculus.hpp"
#include "prequant/chart.hpp"
#include "prequant/common.hpp"
#include "prequant/errors.hpp"
#include "prequant/form.hpp"
#include "prequant/scalar_field.hpp"
#include "prequant/smooth_map.hpp"

namespace prequant {

/// Circle action on a chart: group parameter s in [0, 2*pi) -> diffeomorphism
/// alpha_s, with alpha_0 = id and alpha_s after alpha_t = alpha_{s+t}.
using CircleAction = std::function<SmoothMap(double)>;

/// Rotation action with exact Jacobians.  On the 2-dimensional ball this is
/// rigid rotation about the origin; on a chart with a 2*pi-periodic
/// coordinate `axis` it shifts that coordinate.
inline CircleAction rotation_action(const Chart& chart, int axis = 0) {
  if (chart.is_ball()) {
    if (chart.dim() != 2)
      throw ConfigError("rotation_action: ball rotation is implemented for dim 2 only");
    return [chart](double s) {
      const double c = std::cos(s), sn = std::sin(s);
      Mat R(2, 2);
      R.at(0, 0) = c;
      R.at(0, 1) = -sn;
      R.at(1, 0) = sn;
      R.at(1, 1) = c;
      return SmoothMap(chart, chart,
                       [c, sn](const Coords& p) {
                         Coords q = Coords::zeros(2);
                         q[0] = c * p[0] - sn * p[1];
                         q[1] = sn * p[0] + c * p[1];
                         return q;
                       },
                       [R](const Coords&) { return R; });
    };
  }
  if (axis < 0 || axis >= chart.dim() || !chart.is_periodic(axis))
    throw ConfigError("rotation_action: axis " + std::to_string(axis) + " of chart " +
                      chart.name() + " is not periodic");
  if (std::abs(chart.coord(axis).period() - kTwoPi) > 1e-12)
    throw ConfigError("rotation_action: the rotated coordinate must have period 2*pi");
  return [chart, axis](double s) { return SmoothMap::coordinate_shift(chart, axis, s); };
}

namespace detail {

/// The action sampled at the n-th roots of unity.  Equal weights make the
/// trapezoid rule on the periodic group both the exact Z_n average and a
/// spectrally convergent approximation of the continuum Haar average.
inline std::shared_ptr<const std::vector<SmoothMap>> orbit_maps(const CircleAction& action,
                                                                int nodes) {
  if (nodes < 1) throw ConfigError("average_over_circle: need at least one group node");
  auto maps = std::make_shared<std::vector<SmoothMap>>();
  maps->reserve(nodes);
  for (int j = 0; j < nodes; ++j) maps->push_back(action(kTwoPi * j / nodes));
  return maps;
}

}  // namespace detail

/// Haar average of a scalar field: (1/n) sum_j f(alpha_{2*pi*j/n}(p)).
/// Carries an exact chain-rule gradient when the field and every group map
/// are analytically differentiable.
inline ScalarField average_over_circle(const CircleAction& action, const ScalarField& f,
                                       int nodes = 64) {
  auto maps = detail::orbit_maps(action, nodes);
  const double w = 1.0 / nodes;
  bool analytic = f.has_gradient();
  for (const auto& m : *maps) analytic = analytic && m.has_jacobian();

  ScalarField::Eval ev = [maps, f, w](const Coords& p) {
    Complex s(0, 0);
    for (const auto& m : *maps) s += f(m(p));
    return s * w;
  };
  if (!analytic) return ScalarField(std::move(ev), f.reality());

  ScalarField::Grad gr = [maps, f, w](const Coords& p) {
    Gradient out;
    out.n = p.size();
    for (const auto& m : *maps) {
      const Mat J = m.jacobian(p);
      const Gradient g = f.analytic_gradient(m(p));
      for (int i = 0; i < out.n; ++i)
        for (int b = 0; b < g.n; ++b) out[i] += J.at(b, i) * g[b] * w;
    }
    return out;
  };
  return ScalarField(std::move(ev), f.reality(), std::move(gr));
}

/// Haar average of a differential form: (1/n) sum_j (alpha_{s_j})^* f.
/// Averaging commutes with the exterior derivative, so the average of a
/// closed form is closed and the average of d(beta) is d(average of beta).
inline DifferentialForm average_over_circle(const CircleAction& action,
                                            const DifferentialForm& f, int nodes = 64) {
  auto maps = detail::orbit_maps(action, nodes);
  DifferentialForm acc = pullback_form((*maps)[0], f);
  for (int j = 1; j < static_cast<int>(maps->size()); ++j)
    acc = acc + pullback_form((*maps)[j], f);
  return acc * Complex(1.0 / nodes, 0.0);
}

/// sup over sample points and group nodes of |(alpha_s^* f) - f|, coefficient
/// by coefficient.  Zero (to tolerance) exactly when f is invariant.
inline double invariance_defect(const CircleAction& action, const DifferentialForm& f,
                                const std::vector<Coords>& samples, int group_nodes = 16) {
  auto maps = detail::orbit_maps(action, group_nodes);
  double worst = 0.0;
  for (const auto& m : *maps)
    worst = std::max(worst, form_distance(pullback_form(m, f), f, samples));
  return worst;
}

}  // namespace prequant

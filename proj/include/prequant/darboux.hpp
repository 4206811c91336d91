#pragma once

#include "prequant/flow.hpp"

namespace prequant {

/// Normal-form chart around p: an affine frame change T (from the pointwise
/// symplectic frame of omega(p)) followed by the radial-homotopy Moser flow
/// between the constant standard form and the pulled-back omega on a small
/// ball.  The returned map sends the standard ball of radius r to the chart
/// of omega, fixes p, and pulls omega back to the standard form.  If the
/// normalizing flow leaves the ball the radius was too ambitious and
/// ChartRadiusError suggests r/2.
inline SmoothMap darboux_chart(const SymplecticForm& omega, const Coords& p, double radius,
                               int steps = 100, int path_samples = 100) {
  const Chart& target = omega.chart();
  const int n = target.dim();
  target.require_inside(target.reduce(p), "darboux_chart");

  const Mat T = symplectic_frame(omega.matrix(p));
  const Chart ball = Chart::disk(n, radius);
  const SmoothMap affine = SmoothMap::affine(ball, target, p, T);

  // omega in the affine frame; by construction its matrix at 0 is standard.
  const DifferentialForm pulled = pullback_form(affine, omega.form());

  DifferentialForm standard(ball, 2);
  const int half = n / 2;
  for (int i = 0; i < half; ++i) {
    const Mask m = (1u << i) | (1u << (half + i));
    standard.set(m, ScalarField::constant(Complex(1, 0)));
  }

  try {
    const SymplecticForm w0 = SymplecticForm::checked(standard, path_samples, 1);
    const SymplecticForm w1 = SymplecticForm::checked(pulled, path_samples, 1);
    const MoserPath path = MoserPath::create(w0, w1, path_samples, 1);
    // The difference vanishes at the origin, so the radial primitive vanishes
    // to second order there and the flow fixes the center point.
    const Primitive prim = Primitive::audited(poincare_primitive(path.delta()), path.delta());
    const FlowMap flow = moser_flow(path, prim, steps);
    // The flow integrates lazily; probe it on a sample cloud now so an escape
    // surfaces here as the documented shrink-radius error.  Seeds keep 10%
    // headroom from the rim -- the normalization is only claimed on the
    // interior, since any Moser flow moves points near the boundary.
    for (const auto& y : ball.sample_points(path_samples, 2, 0.1 * radius)) flow.forward(y);
    return SmoothMap::compose(affine, flow.to_map());
  } catch (const FlowEscapeError&) {
    throw ChartRadiusError("darboux_chart: normalizing flow left the ball; retry with r = " +
                               fmt_double(radius / 2),
                           radius / 2);
  } catch (const DegenerateFormError&) {
    throw ChartRadiusError(
        "darboux_chart: interpolation degenerates on this ball; retry with r = " +
            fmt_double(radius / 2),
        radius / 2);
  }
}

}  // namespace prequant

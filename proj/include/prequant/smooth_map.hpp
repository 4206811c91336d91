#pragma once

#include <functional>
#include <utility>

#include "prequant/chart.hpp"
#include "prequant/common.hpp"
#include "prequant/errors.hpp"

namespace prequant {

/// Smooth map between charts: coordinate evaluator plus an optional analytic
/// Jacobian.  Evaluators work on raw (unreduced) coordinates and should
/// themselves be continuous; finite-difference Jacobians reduce differences
/// of periodic target coordinates to the shortest representative so maps that
/// wrap stay differentiable.
class SmoothMap {
 public:
  using Eval = std::function<Coords(const Coords&)>;
  using Jac = std::function<Mat(const Coords&)>;

  SmoothMap() = default;
  SmoothMap(Chart source, Chart target, Eval eval)
      : source_(std::move(source)), target_(std::move(target)), eval_(std::move(eval)) {}
  SmoothMap(Chart source, Chart target, Eval eval, Jac jac)
      : source_(std::move(source)),
        target_(std::move(target)),
        eval_(std::move(eval)),
        jac_(std::move(jac)) {}

  static SmoothMap identity(const Chart& chart) {
    const int n = chart.dim();
    return SmoothMap(chart, chart, [](const Coords& p) { return p; },
                     [n](const Coords&) { return Mat::identity(n); });
  }

  /// Shift one periodic coordinate by a constant (a circle action generator).
  static SmoothMap coordinate_shift(const Chart& chart, int axis, double delta) {
    const int n = chart.dim();
    return SmoothMap(chart, chart,
                     [axis, delta](const Coords& p) {
                       Coords q = p;
                       q[axis] += delta;
                       return q;
                     },
                     [n](const Coords&) { return Mat::identity(n); });
  }

  /// Affine map y -> base + T y (target chart supplied by caller).
  static SmoothMap affine(const Chart& source, const Chart& target, const Coords& base,
                          const Mat& T) {
    return SmoothMap(source, target,
                     [base, T](const Coords& y) { return base + T.mul(y); },
                     [T](const Coords&) { return T; });
  }

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }
  bool valid() const { return static_cast<bool>(eval_); }
  bool has_jacobian() const { return static_cast<bool>(jac_); }

  Coords operator()(const Coords& p) const { return eval_(p); }

  Mat jacobian(const Coords& p, double hrel = 1e-5) const {
    if (jac_) return jac_(p);
    const int rows = target_.dim(), cols = source_.dim();
    Mat J(rows, cols);
    for (int a = 0; a < cols; ++a) {
      double h = hrel * (1.0 + std::abs(p[a]));
      double xp = p[a] + h, xm = p[a] - h;
      if (!source_.is_periodic(a)) {
        const auto& s = source_.coord(a);
        if (xp > s.hi) { xp = s.hi; xm = s.hi - 2 * h; }
        if (xm < s.lo) { xm = s.lo; xp = s.lo + 2 * h; }
      }
      Coords pp = p, pm = p;
      pp[a] = xp;
      pm[a] = xm;
      const Coords fp = eval_(pp), fm = eval_(pm);
      const Coords d = target_.displacement(fp, fm);
      for (int b = 0; b < rows; ++b) J.at(b, a) = d[b] / (xp - xm);
    }
    return J;
  }

  /// outer ∘ inner.  Analytic Jacobians chain when both are present.
  static SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
    if (inner.target() != outer.source())
      throw ChartMismatchError("map composition: inner target " + inner.target().name() +
                               " vs outer source " + outer.source().name());
    Eval oe = outer.eval_, ie = inner.eval_;
    SmoothMap m(inner.source_, outer.target_,
                [oe, ie](const Coords& p) { return oe(ie(p)); });
    if (outer.jac_ && inner.jac_) {
      Jac oj = outer.jac_, ij = inner.jac_;
      m.jac_ = [oe, ie, oj, ij](const Coords& p) { return oj(ie(p)).mul(ij(p)); };
    } else {
      // fall back to finite differences on the composite
    }
    return m;
  }

 private:
  Chart source_, target_;
  Eval eval_;
  Jac jac_;
};

}  // namespace prequant

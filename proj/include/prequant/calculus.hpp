#pragma once

#include <functional>
#include <memory>

#include "prequant/form.hpp"
#include "prequant/smooth_map.hpp"

namespace prequant {

/// Exterior derivative.  Coefficient partials come from analytic gradients
/// when present, central finite differences (relative step hrel) otherwise.
/// Evaluation outside chart bounds raises DomainError through the chart.
inline DifferentialForm exterior_derivative(const DifferentialForm& f, double hrel = kFdStep) {
  const Chart& chart = f.chart();
  if (f.degree() >= chart.dim())
    return DifferentialForm::zero(chart, f.degree() + 1);  // top degree: the empty zero form
  DifferentialForm out(chart, f.degree() + 1);

  struct Term {
    int sign;
    int axis;
    ScalarField field;
  };
  // Collect the contributions per output mask, then build one evaluator each.
  for (Mask target = 0; target < 16; ++target) {
    if (mask_degree(target) != f.degree() + 1) continue;
    auto terms = std::make_shared<std::vector<Term>>();
    for (int i = 0; i < chart.dim(); ++i) {
      if (!(target & (1u << i))) continue;
      const Mask source = target & ~(1u << i);
      const ScalarField* c = f.coeff(source);
      if (!c) continue;
      terms->push_back({insert_sign(i, source), i, *c});
    }
    if (terms->empty()) continue;
    Chart ch = chart;
    ScalarField coeff(
        [terms, ch, hrel](const Coords& p) {
          ch.require_inside(ch.reduce(p), "exterior_derivative");
          Complex s(0, 0);
          for (const auto& t : *terms)
            s += static_cast<double>(t.sign) * gradient(t.field, ch, p, hrel)[t.axis];
          return s;
        },
        f.reality());
    out.set(target, coeff);
  }
  return out;
}

/// Wedge product; antisymmetry and graded signs come from the shuffle sign.
inline DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.chart() != b.chart())
    throw ChartMismatchError("wedge: operands on different charts");
  const int deg = a.degree() + b.degree();
  if (deg > a.chart().dim()) throw DegreeError("wedge: degree exceeds chart dimension");
  DifferentialForm out(a.chart(), deg);

  for (Mask target = 0; target < 16; ++target) {
    if (mask_degree(target) != deg) continue;
    ScalarField acc;
    bool any = false;
    for (Mask ma = 0; ma < 16; ++ma) {
      if ((ma & target) != ma || mask_degree(ma) != a.degree()) continue;
      const Mask mb = target & ~ma;
      const ScalarField* ca = a.coeff(ma);
      const ScalarField* cb = b.coeff(mb);
      if (!ca || !cb) continue;
      const int sign = merge_sign(ma, mb);
      ScalarField term = (*ca) * (*cb) * Complex(sign, 0);
      acc = any ? acc + term : term;
      any = true;
    }
    if (any) out.set(target, acc);
  }
  return out;
}

using VectorField = std::function<Coords(const Coords&)>;

/// Interior product (contraction in the first slot) with a real vector field.
inline DifferentialForm interior_product(const VectorField& X, const DifferentialForm& f) {
  if (f.degree() == 0) throw DegreeError("interior_product: cannot contract a 0-form");
  const Chart& chart = f.chart();
  DifferentialForm out(chart, f.degree() - 1);

  for (Mask target = 0; target < 16; ++target) {
    if (mask_degree(target) != f.degree() - 1) continue;
    struct Term {
      int sign;
      int axis;
      ScalarField field;
    };
    auto terms = std::make_shared<std::vector<Term>>();
    for (int i = 0; i < chart.dim(); ++i) {
      if (target & (1u << i)) continue;
      const ScalarField* c = f.coeff(target | (1u << i));
      if (!c) continue;
      terms->push_back({insert_sign(i, target), i, *c});
    }
    if (terms->empty()) continue;
    VectorField Xc = X;
    out.set(target, ScalarField(
                        [terms, Xc](const Coords& p) {
                          const Coords v = Xc(p);
                          Complex s(0, 0);
                          for (const auto& t : *terms)
                            s += static_cast<double>(t.sign) * v[t.axis] * t.field(p);
                          return s;
                        },
                        f.reality()));
  }
  return out;
}

namespace detail {

/// Determinant of the (rows x cols) Jacobian minor selected by bitmasks.
inline double jacobian_minor(const Mat& J, Mask rows, Mask cols) {
  int r[kMaxDim], c[kMaxDim];
  int k = 0;
  for (int i = 0; i < kMaxDim; ++i)
    if (rows & (1u << i)) r[k++] = i;
  int k2 = 0;
  for (int i = 0; i < kMaxDim; ++i)
    if (cols & (1u << i)) c[k2++] = i;
  Mat sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub.at(i, j) = J.at(r[i], c[j]);
  return det(sub);
}

}  // namespace detail

/// Pullback m*f of a k-form along a smooth map.  Degree 0 is composition;
/// higher degrees contract coefficients with Jacobian minors.
inline DifferentialForm pullback_form(const SmoothMap& m, const DifferentialForm& f,
                                      double hrel = 1e-5) {
  if (f.chart() != m.target())
    throw ChartMismatchError("pullback: form lives on " + f.chart().name() +
                             ", map lands in " + m.target().name());
  const int k = f.degree();
  if (k > m.source().dim())
    throw DegreeError("pullback: form degree exceeds source dimension");
  DifferentialForm out(m.source(), k);

  if (k == 0) {
    const ScalarField* c = f.coeff(0);
    if (c) {
      ScalarField cf = *c;
      SmoothMap mc = m;
      out.set(0, ScalarField([cf, mc](const Coords& p) { return cf(mc(p)); }, cf.reality()));
    }
    return out;
  }

  const auto masks = f.present_masks();
  if (masks.empty()) return out;
  auto fc = std::make_shared<DifferentialForm>(f);
  SmoothMap mc = m;
  for (Mask target = 0; target < 16; ++target) {
    if (mask_degree(target) != k || target >= (1u << m.source().dim())) continue;
    auto ms = std::make_shared<std::vector<Mask>>(masks);
    out.set(target, ScalarField(
                        [fc, mc, ms, target, hrel](const Coords& p) {
                          const Coords y = mc(p);
                          const Mat J = mc.jacobian(p, hrel);
                          Complex s(0, 0);
                          for (Mask src : *ms) {
                            const double minor = detail::jacobian_minor(J, src, target);
                            if (minor != 0.0) s += fc->coefficient_value(src, y) * minor;
                          }
                          return s;
                        },
                        f.reality()));
  }
  return out;
}

}  // namespace prequant

#pragma once

#include <functional>
#include <utility>

#include "prequant/chart.hpp"
#include "prequant/common.hpp"
#include "prequant/errors.hpp"

namespace prequant {

enum class Reality { real, imaginary, complex_any };

inline Reality combine_reality(Reality a, Reality b) {
  if (a == b) return a;
  return Reality::complex_any;
}

inline Reality product_reality(Reality a, Reality b) {
  if (a == Reality::complex_any || b == Reality::complex_any) return Reality::complex_any;
  if (a == b) return Reality::real;  // real*real and i*i (up to sign) are real
  return Reality::imaginary;
}

/// Default relative step for central finite differences.
inline constexpr double kFdStep = 1e-5;

/// Scalar field on a chart: a coordinate evaluator, a reality tag, and an
/// optional analytic gradient.  Value-semantic; combinators propagate
/// gradients by the usual calculus rules so derived fields stay cheap to
/// differentiate exactly.
class ScalarField {
 public:
  using Eval = std::function<Complex(const Coords&)>;
  using Grad = std::function<Gradient(const Coords&)>;

  ScalarField() = default;
  ScalarField(Eval eval, Reality reality) : eval_(std::move(eval)), reality_(reality) {}
  ScalarField(Eval eval, Reality reality, Grad grad)
      : eval_(std::move(eval)), grad_(std::move(grad)), reality_(reality) {}

  static ScalarField zero() {
    return ScalarField([](const Coords&) { return Complex(0, 0); }, Reality::real,
                       [](const Coords& p) { return Gradient{{}, p.size()}; });
  }
  static ScalarField constant(Complex c) {
    Reality r = Reality::complex_any;
    if (c.imag() == 0) r = Reality::real;
    else if (c.real() == 0) r = Reality::imaginary;
    return ScalarField([c](const Coords&) { return c; }, r,
                       [](const Coords& p) { return Gradient{{}, p.size()}; });
  }
  /// Real-valued field from a real lambda; optional real gradient lambda.
  template <class F>
  static ScalarField real(F f) {
    return ScalarField([f](const Coords& p) { return Complex(f(p), 0.0); }, Reality::real);
  }
  template <class F, class G>
  static ScalarField real(F f, G grad) {
    return ScalarField([f](const Coords& p) { return Complex(f(p), 0.0); }, Reality::real,
                       [grad](const Coords& p) {
                         Coords g = grad(p);
                         Gradient out;
                         out.n = g.size();
                         for (int i = 0; i < g.size(); ++i) out[i] = Complex(g[i], 0.0);
                         return out;
                       });
  }

  bool valid() const { return static_cast<bool>(eval_); }
  Complex operator()(const Coords& p) const { return eval_(p); }
  Reality reality() const { return reality_; }
  bool has_gradient() const { return static_cast<bool>(grad_); }
  Gradient analytic_gradient(const Coords& p) const { return grad_(p); }

  ScalarField operator+(const ScalarField& o) const {
    Eval e = eval_, f = o.eval_;
    ScalarField r([e, f](const Coords& p) { return e(p) + f(p); },
                  combine_reality(reality_, o.reality_));
    if (has_gradient() && o.has_gradient()) {
      Grad g = grad_, h = o.grad_;
      r.grad_ = [g, h](const Coords& p) {
        Gradient a = g(p), b = h(p);
        for (int i = 0; i < a.n; ++i) a[i] += b[i];
        return a;
      };
    }
    return r;
  }
  ScalarField operator-(const ScalarField& o) const { return *this + o * Complex(-1, 0); }
  ScalarField operator*(const ScalarField& o) const {
    Eval e = eval_, f = o.eval_;
    ScalarField r([e, f](const Coords& p) { return e(p) * f(p); },
                  product_reality(reality_, o.reality_));
    if (has_gradient() && o.has_gradient()) {
      Grad g = grad_, h = o.grad_;
      r.grad_ = [e, f, g, h](const Coords& p) {
        Gradient a = g(p), b = h(p);
        const Complex u = e(p), v = f(p);
        for (int i = 0; i < a.n; ++i) a[i] = a[i] * v + u * b[i];
        return a;
      };
    }
    return r;
  }
  ScalarField operator*(Complex c) const {
    Eval e = eval_;
    Reality cr = (c.imag() == 0) ? Reality::real
                                 : (c.real() == 0 ? Reality::imaginary : Reality::complex_any);
    ScalarField r([e, c](const Coords& p) { return c * e(p); }, product_reality(reality_, cr));
    if (has_gradient()) {
      Grad g = grad_;
      r.grad_ = [g, c](const Coords& p) {
        Gradient a = g(p);
        for (int i = 0; i < a.n; ++i) a[i] *= c;
        return a;
      };
    }
    return r;
  }

 private:
  Eval eval_;
  Grad grad_;
  Reality reality_ = Reality::complex_any;
};

/// Central finite-difference gradient with relative step h*(1+|x_i|).  Near a
/// non-periodic boundary the stencil is shifted inward so no evaluation
/// leaves the chart.
inline Gradient fd_gradient(const ScalarField& f, const Chart& chart, const Coords& p,
                            double hrel = kFdStep) {
  Gradient g;
  g.n = p.size();
  for (int i = 0; i < p.size(); ++i) {
    double h = hrel * (1.0 + std::abs(p[i]));
    double xp = p[i] + h, xm = p[i] - h;
    if (!chart.is_periodic(i) && i < chart.dim()) {
      const auto& s = chart.coord(i);
      if (xp > s.hi) { xp = s.hi; xm = s.hi - 2 * h; }
      if (xm < s.lo) { xm = s.lo; xp = s.lo + 2 * h; }
    }
    Coords a = p, b = p;
    a[i] = xp;
    b[i] = xm;
    g[i] = (f(a) - f(b)) / (xp - xm);
  }
  return g;
}

/// Gradient dispatch: analytic when available, finite differences otherwise.
inline Gradient gradient(const ScalarField& f, const Chart& chart, const Coords& p,
                         double hrel = kFdStep) {
  if (f.has_gradient()) return f.analytic_gradient(p);
  return fd_gradient(f, chart, p, hrel);
}

/// Sup of the disallowed component over samples; 0 for complex_any fields.
inline double reality_violation(const ScalarField& f, const std::vector<Coords>& samples) {
  if (f.reality() == Reality::complex_any) return 0.0;
  double m = 0;
  for (const auto& p : samples) {
    const Complex v = f(p);
    m = std::max(m, f.reality() == Reality::real ? std::abs(v.imag()) : std::abs(v.real()));
  }
  return m;
}

}  // namespace prequant

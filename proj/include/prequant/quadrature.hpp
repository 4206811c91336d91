#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "prequant/common.hpp"
#include "prequant/errors.hpp"

namespace prequant {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
/// Results are cached per order.
inline const QuadratureRule& gauss_legendre(int order) {
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1) throw ConfigError("gauss_legendre: order must be >= 1");

  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess, then Newton on the recurrence.
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double pp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

/// Gauss-Legendre rule mapped to [a,b].
inline QuadratureRule gauss_legendre_on(double a, double b, int order) {
  const QuadratureRule& base = gauss_legendre(order);
  QuadratureRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    r.nodes[i] = mid + half * base.nodes[i];
    r.weights[i] = half * base.weights[i];
  }
  return r;
}

/// Uniform rule with equal weights on [a, a+period): the trapezoid rule for
/// periodic integrands (spectrally accurate), and simultaneously the Haar
/// average over the cyclic group of order n when used for group averaging.
inline QuadratureRule trapezoid_periodic(double a, double period, int n) {
  if (n < 1) throw ConfigError("trapezoid_periodic: need at least one node");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.assign(n, period / n);
  for (int i = 0; i < n; ++i) r.nodes[i] = a + period * i / n;
  return r;
}

/// Chebyshev interpolant on [a,b] with exact (spectral) derivative and
/// antiderivative in coefficient space.  Used to turn fiberwise integrals
/// into cheap closed-form evaluators.
class ChebyshevInterpolant {
 public:
  ChebyshevInterpolant() = default;

  template <class F>
  static ChebyshevInterpolant fit(F f, double a, double b, int n) {
    ChebyshevInterpolant c;
    c.a_ = a;
    c.b_ = b;
    c.coef_.assign(n, 0.0);
    std::vector<double> vals(n);
    for (int k = 0; k < n; ++k) {
      const double t = std::cos(kPi * (k + 0.5) / n);
      vals[k] = f(0.5 * (a + b) + 0.5 * (b - a) * t);
    }
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += vals[k] * std::cos(kPi * j * (k + 0.5) / n);
      c.coef_[j] = 2.0 * s / n;
    }
    c.coef_[0] *= 0.5;
    return c;
  }

  double operator()(double x) const {
    // Clenshaw recurrence.
    const double t = (2.0 * x - a_ - b_) / (b_ - a_);
    double b1 = 0, b2 = 0;
    for (int j = static_cast<int>(coef_.size()) - 1; j >= 1; --j) {
      const double tmp = 2.0 * t * b1 - b2 + coef_[j];
      b2 = b1;
      b1 = tmp;
    }
    return t * b1 - b2 + coef_[0];
  }

  ChebyshevInterpolant derivative() const {
    const int n = static_cast<int>(coef_.size());
    ChebyshevInterpolant d;
    d.a_ = a_;
    d.b_ = b_;
    d.coef_.assign(n, 0.0);
    if (n >= 2) {
      std::vector<double> c(coef_);
      c[0] *= 2.0;  // undo the halved c0 for the recurrence
      std::vector<double> dc(n + 1, 0.0);
      for (int j = n - 2; j >= 0; --j) dc[j] = dc[j + 2] + 2.0 * (j + 1) * c[j + 1];
      dc[0] *= 0.5;
      const double scale = 2.0 / (b_ - a_);
      for (int j = 0; j < n; ++j) d.coef_[j] = dc[j] * scale;
    }
    return d;
  }

  /// Antiderivative vanishing at the left endpoint a.
  ChebyshevInterpolant antiderivative() const {
    const int n = static_cast<int>(coef_.size());
    ChebyshevInterpolant A;
    A.a_ = a_;
    A.b_ = b_;
    A.coef_.assign(n + 1, 0.0);
    std::vector<double> c(coef_);
    c[0] *= 2.0;
    const double scale = 0.5 * (b_ - a_) / 2.0;
    for (int j = 1; j <= n; ++j) {
      const double cm = c[j - 1];
      const double cp = (j + 1 < n) ? c[j + 1] : 0.0;
      A.coef_[j] = scale * (cm - cp) / j;
    }
    A.coef_[0] = 0.0;
    const double at_a = A.eval_raw(a_);
    A.coef_[0] = -at_a;
    return A;
  }

 private:
  double eval_raw(double x) const { return (*this)(x); }

  double a_ = -1.0, b_ = 1.0;
  std::vector<double> coef_;
};

}  // namespace prequant

#pragma once

#include <memory>

#include "prequant/primitives.hpp"

namespace prequant {

/// Solve iota_X omega_t = -alpha at one point.  In components the equation
/// reads (omega^t X)_j = -alpha_j with the full antisymmetric coefficient
/// matrix, i.e. omega X = alpha, so X = omega^{-1} alpha.  The right-hand
/// side must be real (tangent vectors are real).
inline Coords moser_vector_field(const MoserPath& path, const DifferentialForm& alpha,
                                 double t, const Coords& p, double min_det = 1e-12) {
  const int n = path.chart().dim();
  const Mat M = path.matrix_at(t, p);
  const double d = det(M);
  if (std::abs(d) < min_det)
    throw DegenerateFormError("moser_vector_field: omega_t degenerate at " + p.str());

  Coords a = Coords::zeros(n);
  for (int i = 0; i < n; ++i) {
    const Complex c = alpha.coefficient_value(1u << i, p);
    if (std::abs(c.imag()) > 1e-9)
      throw NumericalError("moser_vector_field: primitive has an imaginary part");
    a[i] = c.real();
  }

  // Solve M X = a by Gaussian elimination with partial pivoting (n <= 4).
  Mat A = M;
  Coords b = a;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A.at(r, col)) > std::abs(A.at(piv, col))) piv = r;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(A.at(col, c), A.at(piv, c));
      std::swap(b[col], b[piv]);
    }
    const double diag = A.at(col, col);
    if (std::abs(diag) < 1e-300)
      throw DegenerateFormError("moser_vector_field: singular solve");
    for (int r = col + 1; r < n; ++r) {
      const double f = A.at(r, col) / diag;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) A.at(r, c) -= f * A.at(col, c);
      b[r] -= f * b[col];
    }
  }
  Coords x = Coords::zeros(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= A.at(r, c) * x[c];
    x[r] = s / A.at(r, r);
  }
  return x;
}

using TimeVectorField = std::function<Coords(double, const Coords&)>;

namespace detail {

/// Fourth-order five-point stencil for the spatial Jacobian of a vector
/// field at a frozen time.  Field values are tangent vectors, so plain
/// differences apply (no periodic reduction).  Field evaluations are single
/// algebraic expressions, so the stencil noise stays near machine epsilon.
inline Mat field_jacobian(const TimeVectorField& X, double t, const Coords& x,
                          double hrel = 1e-4) {
  const int n = x.size();
  Mat J(n, n);
  for (int a = 0; a < n; ++a) {
    const double h = hrel * (1.0 + std::abs(x[a]));
    Coords p1 = x, m1 = x, p2 = x, m2 = x;
    p1[a] += h;
    m1[a] -= h;
    p2[a] += 2 * h;
    m2[a] -= 2 * h;
    const Coords f1 = X(t, p1), g1 = X(t, m1), f2 = X(t, p2), g2 = X(t, m2);
    for (int b = 0; b < n; ++b) J.at(b, a) = (8.0 * (f1[b] - g1[b]) - (f2[b] - g2[b])) / (12.0 * h);
  }
  return J;
}

/// y + a * x for the small dense matrices used below.
inline Mat mat_axpy(const Mat& y, double a, const Mat& x) {
  Mat r = y;
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) r.at(i, j) += a * x.at(i, j);
  return r;
}

}  // namespace detail

/// Time-one map of a time-dependent vector field, integrated with the
/// classical fourth-order Runge-Kutta scheme in N steps.  Every stage point
/// is checked against chart bounds and the pole exclusion band; leaving
/// either aborts with FlowEscapeError (no clamping).  The inverse integrates
/// backwards in time.  The zero field short-circuits to an exact identity so
/// trivial deformations do not pick up finite-difference noise.
class FlowMap {
 public:
  FlowMap() = default;
  FlowMap(Chart chart, TimeVectorField X, int steps, bool is_identity = false)
      : chart_(std::move(chart)), X_(std::move(X)), steps_(steps), identity_(is_identity) {
    if (steps_ < 1) throw ConfigError("flow map: need at least one step");
  }

  static FlowMap identity_flow(const Chart& chart) {
    return FlowMap(chart, [](double, const Coords& p) { return p * 0.0; }, 1, true);
  }

  const Chart& chart() const { return chart_; }
  int steps() const { return steps_; }
  bool is_identity() const { return identity_; }

  Coords forward(const Coords& p) const { return integrate(p, 0.0, 1.0); }
  Coords inverse(const Coords& p) const { return integrate(p, 1.0, 0.0); }

  /// Flow from time 0 to arbitrary time s in [0,1].
  Coords at_time(double s, const Coords& p) const { return integrate(p, 0.0, s); }

  /// Jacobian of the forward map (identity flows return the exact identity
  /// matrix), computed by integrating the variational equation
  ///   dJ/dt = DX(t, x(t)) J,   J(0) = I,
  /// alongside the trajectory with the same Runge-Kutta steps.  Differencing
  /// the composed flow instead would divide the integrator's accumulated
  /// roundoff by the stencil width and floor the Jacobian near 1e-9 for
  /// mixing fields; the variational route keeps it at the scheme's own
  /// O(steps^-4) truncation.  hrel feeds the five-point stencil that reads
  /// DX off the field.
  Mat jacobian(const Coords& p, double hrel = 1e-4) const {
    if (identity_) return Mat::identity(chart_.dim());
    return integrate_variational(p, 0.0, 1.0, hrel).second;
  }

  SmoothMap to_map() const {
    if (identity_) return SmoothMap::identity(chart_);
    const FlowMap copy = *this;
    return SmoothMap(
        chart_, chart_, [copy](const Coords& p) { return copy.forward(p); },
        [copy](const Coords& p) { return copy.jacobian(p); });
  }

  SmoothMap inverse_map() const {
    if (identity_) return SmoothMap::identity(chart_);
    const FlowMap copy = *this;
    return SmoothMap(
        chart_, chart_, [copy](const Coords& p) { return copy.inverse(p); },
        [copy](const Coords& p) { return copy.integrate_variational(p, 1.0, 0.0, 1e-4).second; });
  }

 private:
  Coords integrate(const Coords& p0, double t0, double t1) const {
    if (identity_ || t0 == t1) return p0;
    check(p0, t0);
    const double h = (t1 - t0) / steps_;
    Coords p = p0;
    for (int k = 0; k < steps_; ++k) {
      const double t = t0 + k * h;
      const Coords k1 = X_(t, p);
      const Coords k2 = X_(t + 0.5 * h, check(p.axpy(0.5 * h, k1), t));
      const Coords k3 = X_(t + 0.5 * h, check(p.axpy(0.5 * h, k2), t));
      const Coords k4 = X_(t + h, check(p.axpy(h, k3), t));
      Coords step = k1;
      step = step.axpy(2.0, k2);
      step = step.axpy(2.0, k3);
      step = step.axpy(1.0, k4);
      p = check(p.axpy(h / 6.0, step), t + h);
    }
    return p;
  }

  /// Trajectory and variational system integrated together, one RK4 stage
  /// pair at a time.  Stage points are bound-checked exactly as in
  /// integrate(); the field Jacobian stencil may overhang the chart by 2h,
  /// which coefficient evaluation tolerates.
  std::pair<Coords, Mat> integrate_variational(const Coords& p0, double t0, double t1,
                                               double hrel) const {
    const int n = chart_.dim();
    Mat J = Mat::identity(n);
    if (identity_ || t0 == t1) return {p0, J};
    check(p0, t0);
    const double h = (t1 - t0) / steps_;
    Coords p = p0;
    for (int k = 0; k < steps_; ++k) {
      const double t = t0 + k * h;
      const Coords k1 = X_(t, p);
      const Mat K1 = detail::field_jacobian(X_, t, p, hrel).mul(J);
      const Coords pb = check(p.axpy(0.5 * h, k1), t);
      const Coords k2 = X_(t + 0.5 * h, pb);
      const Mat K2 =
          detail::field_jacobian(X_, t + 0.5 * h, pb, hrel).mul(detail::mat_axpy(J, 0.5 * h, K1));
      const Coords pc = check(p.axpy(0.5 * h, k2), t);
      const Coords k3 = X_(t + 0.5 * h, pc);
      const Mat K3 =
          detail::field_jacobian(X_, t + 0.5 * h, pc, hrel).mul(detail::mat_axpy(J, 0.5 * h, K2));
      const Coords pd = check(p.axpy(h, k3), t);
      const Coords k4 = X_(t + h, pd);
      const Mat K4 = detail::field_jacobian(X_, t + h, pd, hrel).mul(detail::mat_axpy(J, h, K3));
      Coords step = k1;
      step = step.axpy(2.0, k2);
      step = step.axpy(2.0, k3);
      step = step.axpy(1.0, k4);
      p = check(p.axpy(h / 6.0, step), t + h);
      Mat jstep = detail::mat_axpy(K1, 2.0, K2);
      jstep = detail::mat_axpy(jstep, 2.0, K3);
      jstep = detail::mat_axpy(jstep, 1.0, K4);
      J = detail::mat_axpy(J, h / 6.0, jstep);
    }
    return {p, J};
  }

  const Coords& check(const Coords& p, double t) const {
    const Coords red = chart_.reduce(p);
    if (!chart_.contains(red))
      throw FlowEscapeError("flow escaped chart bounds", p, t);
    if (chart_.in_exclusion_band(red))
      throw FlowEscapeError("flow entered the pole exclusion band", p, t);
    return p;
  }

  Chart chart_;
  TimeVectorField X_;
  int steps_ = 1;
  bool identity_ = false;
};

/// Moser flow: integrate X_t = omega_t^{-1} alpha from t = 0 to 1.  With
/// d(alpha) = omega_1 - omega_0 the time-one map Phi satisfies
/// Phi^* omega_1 = omega_0 up to discretization error.
inline FlowMap moser_flow(const MoserPath& path, const Primitive& primitive, int steps = 200) {
  // A vanishing primitive means omega_1 = omega_0: the flow is the identity.
  const auto pts = path.chart().sample_points(32, 5);
  if (primitive.alpha.sup_norm(pts) < 1e-13) return FlowMap::identity_flow(path.chart());

  auto pth = std::make_shared<MoserPath>(path);
  auto alpha = std::make_shared<DifferentialForm>(primitive.alpha);
  return FlowMap(path.chart(),
                 [pth, alpha](double t, const Coords& p) {
                   return moser_vector_field(*pth, *alpha, t, p);
                 },
                 steps);
}

/// sup over samples of |Phi^* omega_1 - omega_0| coefficient-wise.
inline double pullback_residual(const FlowMap& flow, const MoserPath& path, int samples = 200,
                                std::uint64_t seed = 3, double sample_margin = 0.01) {
  const auto pts = path.chart().sample_points(samples, seed, sample_margin);
  const DifferentialForm pulled = pullback_form(flow.to_map(), path.w1().form());
  return form_distance(pulled, path.w0().form(), pts);
}

/// sup over samples of |Phi^{-1}(Phi(p)) - p|.
inline double invertibility_defect(const FlowMap& flow, int samples = 50,
                                   std::uint64_t seed = 13, double sample_margin = 0.01) {
  double worst = 0;
  for (const auto& p : flow.chart().sample_points(samples, seed, sample_margin)) {
    const Coords q = flow.inverse(flow.forward(p));
    worst = std::max(worst, flow.chart().displacement(q, p).norm());
  }
  return worst;
}

}  // namespace prequant

#pragma once

#include <vector>

#include "prequant/integrate.hpp"

namespace prequant {

/// Nondegenerate (sampled) real closed 2-form.  The checked constructor
/// enforces |det| >= min_det on a deterministic sample cloud; unchecked()
/// admits degenerate test doubles (flat bundles with zero curvature).
class SymplecticForm {
 public:
  SymplecticForm() = default;

  static SymplecticForm checked(const DifferentialForm& form, int samples = 200,
                                std::uint64_t seed = 0, double min_det = 1e-10) {
    require_shape(form);
    SymplecticForm w(form);
    for (const auto& p : form.chart().sample_points(samples, seed)) {
      const double d = det(w.matrix(p));
      if (std::abs(d) < min_det)
        throw DegenerateFormError("symplectic form degenerate at " + p.str() +
                                  " (|det| = " + fmt_double(std::abs(d)) + ")");
    }
    return w;
  }

  /// No nondegeneracy sampling: used for the zero-curvature test double.
  static SymplecticForm unchecked(const DifferentialForm& form) {
    require_shape(form);
    return SymplecticForm(form);
  }

  const DifferentialForm& form() const { return form_; }
  const Chart& chart() const { return form_.chart(); }

  /// Full antisymmetric coefficient matrix at p.
  Mat matrix(const Coords& p) const {
    const int n = chart().dim();
    Mat M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Complex c = form_.coefficient_value((1u << i) | (1u << j), p);
        M.at(i, j) = c.real();
        M.at(j, i) = -c.real();
      }
    return M;
  }

 private:
  explicit SymplecticForm(DifferentialForm f) : form_(std::move(f)) {}
  static void require_shape(const DifferentialForm& f) {
    if (f.degree() != 2) throw DegreeError("symplectic form must have degree 2");
    if (f.reality() != Reality::real)
      throw DegenerateFormError("symplectic form must be real-valued");
  }

  DifferentialForm form_;
};

/// Normalize an antisymmetric matrix to the standard block form:
/// returns T with T^t M T = J, J = [[0, I], [-I, 0]].  Deterministic
/// symplectic Gram-Schmidt, always consuming the largest remaining pairing
/// first (ties broken lexicographically).
inline Mat symplectic_frame(const Mat& M, double min_pairing = 1e-12) {
  const int n = M.rows();
  if (n % 2 != 0) throw DegenerateFormError("symplectic_frame: odd dimension");
  const int half = n / 2;

  auto pairing = [&M, n](const std::array<double, kMaxDim * kMaxDim>& basis, int a, int b) {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += basis[a * kMaxDim + i] * M.at(i, j) * basis[b * kMaxDim + j];
    return s;
  };

  std::array<double, kMaxDim * kMaxDim> basis{};
  std::vector<int> pool;
  for (int i = 0; i < n; ++i) {
    basis[i * kMaxDim + i] = 1.0;
    pool.push_back(i);
  }

  std::vector<std::array<double, kMaxDim>> q, pvec;
  for (int step = 0; step < half; ++step) {
    double best = 0;
    int ba = -1, bb = -1;
    for (size_t a = 0; a < pool.size(); ++a)
      for (size_t b = a + 1; b < pool.size(); ++b) {
        const double w = std::abs(pairing(basis, pool[a], pool[b]));
        // strict > keeps the lexicographically first pair among ties
        if (w > best) { best = w; ba = static_cast<int>(a); bb = static_cast<int>(b); }
      }
    if (ba < 0 || best < min_pairing)
      throw DegenerateFormError("symplectic_frame: matrix numerically singular");

    const int ia = pool[ba], ib = pool[bb];
    double w = pairing(basis, ia, ib);
    // Symmetric normalization: both partners scaled by 1/sqrt|w|, with the
    // sign folded into the second so the pairing becomes exactly +1.
    const double s = std::sqrt(std::abs(w));
    std::array<double, kMaxDim> u{}, v{};
    for (int i = 0; i < n; ++i) {
      u[i] = basis[ia * kMaxDim + i] / s;
      v[i] = basis[ib * kMaxDim + i] / s * (w > 0 ? 1.0 : -1.0);
    }
    q.push_back(u);
    pvec.push_back(v);

    // Project the remaining pool onto the symplectic complement of (u, v).
    pool.erase(pool.begin() + bb);
    pool.erase(pool.begin() + ba);
    auto mw = [&M, n](const std::array<double, kMaxDim>& x, const double* y) {
      double s2 = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s2 += x[i] * M.at(i, j) * y[j];
      return s2;
    };
    for (int idx : pool) {
      double* wv = &basis[idx * kMaxDim];
      const double c_v = mw(u, wv);   // omega(u, w)
      const double c_u = mw(v, wv);   // omega(v, w)
      // w' = w - omega(w,v) u + omega(w,u) v = w + omega(v,w) u - omega(u,w) v
      for (int i = 0; i < n; ++i) wv[i] += c_u * u[i] - c_v * v[i];
    }
  }

  Mat T(n, n);
  for (int c = 0; c < half; ++c)
    for (int i = 0; i < n; ++i) {
      T.at(i, c) = q[c][i];
      T.at(i, half + c) = pvec[c][i];
    }
  return T;
}

/// Standard block matrix J = [[0, I], [-I, 0]].
inline Mat standard_symplectic_matrix(int n) {
  Mat J(n, n);
  const int half = n / 2;
  for (int i = 0; i < half; ++i) {
    J.at(i, half + i) = 1.0;
    J.at(half + i, i) = -1.0;
  }
  return J;
}

/// Linear interpolation between cohomologous symplectic forms.  Construction
/// validates nondegeneracy along a 21-point t-grid on a sample cloud and the
/// equality of total integrals on compact surfaces and the disk.
class MoserPath {
 public:
  static MoserPath create(const SymplecticForm& w0, const SymplecticForm& w1,
                          int samples = 200, std::uint64_t seed = 0,
                          double cohomology_tol = 1e-8, double min_det = 1e-10) {
    w0.form().require_same_shape(w1.form(), "moser path");
    MoserPath path(w0, w1);
    const auto pts = w0.chart().sample_points(samples, seed);
    for (int ti = 0; ti <= 20; ++ti) {
      const double t = ti / 20.0;
      for (const auto& p : pts) {
        const double d = det(path.matrix_at(t, p));
        if (std::abs(d) < min_det)
          throw DegenerateFormError("moser path degenerate at t = " + fmt_double(t) +
                                    ", p = " + p.str());
      }
    }
    // On a compact surface the two forms must represent the same cohomology
    // class; on a ball every closed form is exact and no condition applies.
    if (w0.chart().dim() == 2 && w0.chart().compact()) {
      const Region total = Region::full(w0.chart());
      const Complex i0 = integrate_form(w0.form(), total);
      const Complex i1 = integrate_form(w1.form(), total);
      if (std::abs(i1 - i0) > cohomology_tol)
        throw CohomologyObstructionError(
            "moser path: endpoint forms have different total integrals", i1 - i0);
    }
    return path;
  }

  const SymplecticForm& w0() const { return w0_; }
  const SymplecticForm& w1() const { return w1_; }
  const Chart& chart() const { return w0_.chart(); }

  /// omega_1 - omega_0, the form a Moser primitive must integrate.
  DifferentialForm delta() const { return w1_.form() - w0_.form(); }

  /// omega_t = omega_0 + t(omega_1 - omega_0).
  DifferentialForm form_at(double t) const {
    return w0_.form() * Complex(1.0 - t, 0) + w1_.form() * Complex(t, 0);
  }

  Mat matrix_at(double t, const Coords& p) const {
    const Mat a = w0_.matrix(p), b = w1_.matrix(p);
    Mat m(a.rows(), a.cols());
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < a.cols(); ++c) m.at(r, c) = (1.0 - t) * a.at(r, c) + t * b.at(r, c);
    return m;
  }

 private:
  MoserPath(SymplecticForm w0, SymplecticForm w1) : w0_(std::move(w0)), w1_(std::move(w1)) {}
  SymplecticForm w0_, w1_;
};

/// A 1-form alpha with d(alpha) = omega_1 - omega_0, plus the sampled residual
/// sup |d(alpha) - delta| recorded at construction.
struct Primitive {
  DifferentialForm alpha;
  double residual = 0.0;

  static Primitive audited(DifferentialForm a, const DifferentialForm& delta, int samples = 64,
                           std::uint64_t seed = 7) {
    Primitive pr;
    pr.alpha = std::move(a);
    const DifferentialForm da = exterior_derivative(pr.alpha);
    pr.residual = form_distance(da, delta, delta.chart().sample_points(samples, seed));
    return pr;
  }
};

}  // namespace prequant

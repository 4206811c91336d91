#pragma once

#include <array>
#include <bit>
#include <optional>
#include <vector>

#include "prequant/chart.hpp"
#include "prequant/scalar_field.hpp"

namespace prequant {

/// Multi-indices are bitmasks over coordinate axes (dim <= 4, so 16 masks).
/// Bit i set means dx^i is a factor; coefficients are stored against the
/// increasing-order basis monomial of each mask.
using Mask = unsigned;

inline int mask_degree(Mask m) { return std::popcount(m); }

inline Mask lower_bits(int i) { return (1u << i) - 1u; }

/// Sign of dx^i ∧ dx^m relative to the increasing basis monomial of m|{i};
/// 0 if i already occurs in m.
inline int insert_sign(int i, Mask m) {
  if (m & (1u << i)) return 0;
  return (std::popcount(m & lower_bits(i)) % 2) ? -1 : 1;
}

/// Shuffle sign of dx^a ∧ dx^b relative to the increasing monomial of a|b;
/// 0 if the masks overlap.
inline int merge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int inversions = 0;
  for (int i = 0; i < kMaxDim; ++i)
    if (a & (1u << i)) inversions += std::popcount(b & lower_bits(i));
  return (inversions % 2) ? -1 : 1;
}

/// Differential form of fixed degree with ScalarField coefficients indexed by
/// increasing multi-indices.  Missing coefficients are zero.
class DifferentialForm {
 public:
  DifferentialForm() = default;
  // degree dim+1 is admitted as the always-empty zero form, so that the
  // exterior derivative of a top-degree form has somewhere to live.
  DifferentialForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
    if (degree < 0 || degree > chart_.dim() + 1)
      throw DegreeError("form degree " + std::to_string(degree) + " out of range for chart " +
                        chart_.name());
  }

  static DifferentialForm zero(const Chart& chart, int degree) {
    return DifferentialForm(chart, degree);
  }

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }

  void set(Mask m, ScalarField f) {
    if (mask_degree(m) != degree_)
      throw DegreeError("coefficient mask degree does not match form degree");
    coeff_[m] = std::move(f);
  }

  const ScalarField* coeff(Mask m) const {
    return coeff_[m].has_value() ? &*coeff_[m] : nullptr;
  }

  Complex coefficient_value(Mask m, const Coords& p) const {
    return coeff_[m].has_value() ? (*coeff_[m])(p) : Complex(0, 0);
  }

  std::vector<Mask> present_masks() const {
    std::vector<Mask> ms;
    for (Mask m = 0; m < 16; ++m)
      if (coeff_[m].has_value()) ms.push_back(m);
    return ms;
  }

  /// Joint reality of all stored coefficients.
  Reality reality() const {
    bool any = false;
    Reality r = Reality::real;
    for (Mask m = 0; m < 16; ++m) {
      if (!coeff_[m].has_value()) continue;
      r = any ? combine_reality(r, coeff_[m]->reality()) : coeff_[m]->reality();
      any = true;
    }
    return any ? r : Reality::real;
  }

  DifferentialForm operator+(const DifferentialForm& o) const {
    require_same_shape(o, "form sum");
    DifferentialForm r(chart_, degree_);
    for (Mask m = 0; m < 16; ++m) {
      if (coeff_[m].has_value() && o.coeff_[m].has_value())
        r.coeff_[m] = *coeff_[m] + *o.coeff_[m];
      else if (coeff_[m].has_value())
        r.coeff_[m] = *coeff_[m];
      else if (o.coeff_[m].has_value())
        r.coeff_[m] = *o.coeff_[m];
    }
    return r;
  }
  DifferentialForm operator-(const DifferentialForm& o) const {
    return *this + o * Complex(-1, 0);
  }
  DifferentialForm operator*(Complex c) const {
    DifferentialForm r(chart_, degree_);
    for (Mask m = 0; m < 16; ++m)
      if (coeff_[m].has_value()) r.coeff_[m] = *coeff_[m] * c;
    return r;
  }

  /// Sup over samples of the largest coefficient magnitude.
  double sup_norm(const std::vector<Coords>& samples) const {
    double s = 0;
    for (const auto& p : samples)
      for (Mask m = 0; m < 16; ++m)
        if (coeff_[m].has_value()) s = std::max(s, std::abs((*coeff_[m])(p)));
    return s;
  }

  void require_same_shape(const DifferentialForm& o, const char* what) const {
    if (chart_ != o.chart_)
      throw ChartMismatchError(std::string(what) + ": charts " + chart_.name() + " vs " +
                               o.chart_.name());
    if (degree_ != o.degree_) throw DegreeError(std::string(what) + ": degrees differ");
  }

 private:
  Chart chart_;
  int degree_ = 0;
  std::array<std::optional<ScalarField>, 16> coeff_;
};

/// Sup over samples of |a - b| coefficient-wise.
inline double form_distance(const DifferentialForm& a, const DifferentialForm& b,
                            const std::vector<Coords>& samples) {
  a.require_same_shape(b, "form distance");
  double s = 0;
  for (const auto& p : samples)
    for (Mask m = 0; m < 16; ++m)
      if (mask_degree(m) == a.degree())
        s = std::max(s, std::abs(a.coefficient_value(m, p) - b.coefficient_value(m, p)));
  return s;
}

}  // namespace prequant

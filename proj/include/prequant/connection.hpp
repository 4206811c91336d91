#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "prequant/calculus.hpp"
#include "prequant/integrate.hpp"
#include "prequant/symplectic.hpp"

namespace prequant {

/// Real part of a form, coefficient by coefficient.  Taking real parts
/// commutes with d, so gradients carry over by the same projection.
inline DifferentialForm real_part_form(const DifferentialForm& f) {
  DifferentialForm r(f.chart(), f.degree());
  for (Mask m : f.present_masks()) {
    const ScalarField c = *f.coeff(m);
    ScalarField::Eval ev = [c](const Coords& p) { return Complex(c(p).real(), 0.0); };
    if (c.has_gradient()) {
      ScalarField::Grad gr = [c](const Coords& p) {
        Gradient g = c.analytic_gradient(p);
        for (int i = 0; i < g.n; ++i) g[i] = Complex(g[i].real(), 0.0);
        return g;
      };
      r.set(m, ScalarField(std::move(ev), Reality::real, std::move(gr)));
    } else {
      r.set(m, ScalarField(std::move(ev), Reality::real));
    }
  }
  return r;
}

/// Prequantum connection: a base symplectic form together with one real
/// potential 1-form per trivialization region, under the fixed convention
/// that the full connection form is -i*alpha, the curvature condition reads
/// d(alpha) = omega, and holonomy is exp(i * loop integral of alpha).
/// Region frames are related by e_B = exp(-i Lambda_B) e_ref for a per-region
/// real phase field Lambda_B (so alpha_B - alpha_A = d(Lambda_B - Lambda_A)),
/// stored alongside the integer winding it realizes on the model charts.
class PrequantumConnection {
 public:
  PrequantumConnection(SymplecticForm base, std::map<std::string, DifferentialForm> potentials,
                       bool hermitian, std::map<std::string, ScalarField> log_phase,
                       std::map<std::string, int> winding, std::string id)
      : base_(std::move(base)),
        potentials_(std::move(potentials)),
        log_phase_(std::move(log_phase)),
        winding_(std::move(winding)),
        hermitian_(hermitian),
        id_(std::move(id)) {
    if (potentials_.empty()) throw ConfigError("connection: needs at least one region");
    for (const auto& [name, alpha] : potentials_) {
      if (alpha.degree() != 1)
        throw DegreeError("connection: potential in region " + name + " must be a 1-form");
      if (alpha.chart() != base_.chart())
        throw ChartMismatchError("connection: potential chart mismatch in region " + name);
      if (hermitian_ && alpha.reality() != Reality::real)
        throw HermitianViolationError("connection: hermitian potentials must be real (region " +
                                      name + ")");
      if (!log_phase_.count(name)) log_phase_[name] = ScalarField::zero();
      if (!winding_.count(name)) winding_[name] = 0;
    }
  }

  /// Degree-k monopole on the sphere cylinder: omega = k dz^dtheta with
  /// north potential k(z-1) dtheta and south potential k(z+1) dtheta.  The
  /// south frame winds 2k times relative to north: Lambda_S = 2k theta.
  static PrequantumConnection monopole(int k, double exclusion_band = 1e-3) {
    if (k == 0) throw ConfigError("monopole: k must be nonzero");
    const Chart sph = Chart::sphere_cyl(exclusion_band);
    DifferentialForm w(sph, 2);
    w.set(0b11, ScalarField::constant(Complex(-k, 0)));  // dz^dtheta = -dtheta^dz

    DifferentialForm north(sph, 1), south(sph, 1);
    north.set(0b01, ScalarField::real([k](const Coords& p) { return k * (p[1] - 1.0); },
                                      [k](const Coords&) { return Coords{0.0, double(k)}; }));
    south.set(0b01, ScalarField::real([k](const Coords& p) { return k * (p[1] + 1.0); },
                                      [k](const Coords&) { return Coords{0.0, double(k)}; }));

    std::map<std::string, ScalarField> phase;
    phase["north"] = ScalarField::zero();
    phase["south"] =
        ScalarField::real([k](const Coords& p) { return 2.0 * k * p[0]; },
                          [k](const Coords&) { return Coords{2.0 * k, 0.0}; });
    return PrequantumConnection(SymplecticForm::checked(w),
                                {{"north", north}, {"south", south}}, true, std::move(phase),
                                {{"north", 0}, {"south", 2 * k}}, "monopole-k" + std::to_string(k));
  }

  /// omega = dx^dy on the ball with the rotation-invariant radial potential
  /// (x dy - y dx)/2.
  static PrequantumConnection trivial_disk(double radius = 1.0) {
    const Chart dsk = Chart::disk(2, radius);
    DifferentialForm w(dsk, 2);
    w.set(0b11, ScalarField::constant(Complex(1, 0)));
    DifferentialForm alpha(dsk, 1);
    alpha.set(0b01, ScalarField::real([](const Coords& p) { return -0.5 * p[1]; },
                                      [](const Coords&) { return Coords{0.0, -0.5}; }));
    alpha.set(0b10, ScalarField::real([](const Coords& p) { return 0.5 * p[0]; },
                                      [](const Coords&) { return Coords{0.5, 0.0}; }));
    return PrequantumConnection(SymplecticForm::checked(w), {{"main", alpha}}, true, {}, {},
                                "disk-trivial");
  }

  /// Flat connection on the torus: omega = 0 (degenerate -- allowed here as
  /// the standard test double for pure holonomy questions), alpha = 0.
  static PrequantumConnection torus_flat() {
    const Chart tor = Chart::torus();
    return PrequantumConnection(SymplecticForm::unchecked(DifferentialForm::zero(tor, 2)),
                                {{"main", DifferentialForm::zero(tor, 1)}}, true, {}, {},
                                "torus-flat");
  }

  const Chart& chart() const { return base_.chart(); }
  const SymplecticForm& base() const { return base_; }
  bool hermitian() const { return hermitian_; }
  const std::string& id() const { return id_; }

  std::vector<std::string> region_names() const {
    std::vector<std::string> names;
    for (const auto& [name, _] : potentials_) names.push_back(name);
    return names;  // std::map keeps these sorted -- deterministic everywhere
  }

  const DifferentialForm& potential(const std::string& region) const {
    auto it = potentials_.find(region);
    if (it == potentials_.end()) throw ConfigError("connection: unknown region " + region);
    return it->second;
  }
  const ScalarField& log_phase(const std::string& region) const {
    auto it = log_phase_.find(region);
    if (it == log_phase_.end()) throw ConfigError("connection: unknown region " + region);
    return it->second;
  }
  int winding(const std::string& region) const {
    auto it = winding_.find(region);
    if (it == winding_.end()) throw ConfigError("connection: unknown region " + region);
    return it->second;
  }

  /// Curvature of one region's potential: d(alpha).  The prequantum
  /// condition asserts this equals the base form.
  DifferentialForm curvature(const std::string& region) const {
    return exterior_derivative(potential(region));
  }

  double curvature_residual(const std::string& region, int samples = 100,
                            std::uint64_t seed = 11) const {
    return form_distance(curvature(region), base_.form(), chart().sample_points(samples, seed));
  }

  /// sup over region pairs and samples of |(alpha_B - alpha_A) - d(Lambda_B -
  /// Lambda_A)|: the frames and the potentials must tell the same story.
  double overlap_residual(int samples = 100, std::uint64_t seed = 12) const {
    const auto names = region_names();
    const auto pts = chart().sample_points(samples, seed);
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < names.size(); ++i)
      for (std::size_t j = i + 1; j < names.size(); ++j) {
        DifferentialForm lhs = potential(names[j]) - potential(names[i]);
        DifferentialForm phase_diff(chart(), 0);
        phase_diff.set(0, log_phase_.at(names[j]) - log_phase_.at(names[i]));
        worst = std::max(worst, form_distance(lhs, exterior_derivative(phase_diff), pts));
      }
    return worst;
  }

  /// |integral of omega - nearest multiple of 2*pi| on closed total spaces
  /// (zero by convention elsewhere: no integrality condition on the ball).
  double integrality_defect(int gl_order = 32, int trap_nodes = 256) const {
    if (!chart().compact()) return 0.0;
    const Complex I = integrate_form(base_.form(), Region::full(chart()), gl_order, trap_nodes);
    const double val = I.real();
    return std::abs(val - kTwoPi * std::round(val / kTwoPi));
  }

  /// max over samples near the pole band of |dtheta-coefficient| / (1-|z|),
  /// taken at the pole(s) this region is responsible for.  Bounded ratios
  /// certify first-order decay; a non-decaying coefficient c shows up as
  /// roughly c / band, orders of magnitude above any smooth bound.
  double pole_decay_defect(const std::string& region, int theta_nodes = 32) const {
    if (chart().name() != "sphere_cyl") return 0.0;
    const double band = chart().coord(1).exclusion;
    std::vector<double> rows;
    const bool north_side = region != "south";
    const bool south_side = region != "north";
    for (double depth : {1.0, 1.5, 2.0, 3.0}) {
      if (north_side) rows.push_back(1.0 - depth * band);
      if (south_side) rows.push_back(-1.0 + depth * band);
    }
    const DifferentialForm& alpha = potential(region);
    double worst = 0.0;
    for (double z : rows)
      for (int j = 0; j < theta_nodes; ++j) {
        const Coords p{kTwoPi * j / theta_nodes, z};
        worst = std::max(worst, std::abs(alpha.coefficient_value(0b01, p)) / (1.0 - std::abs(z)));
      }
    return worst;
  }

  /// Throws unless curvature, overlap consistency, integrality and pole
  /// decay all hold.  Factories produce valid data; validation is for
  /// scenario reports and for data built by hand.
  void validate(double curvature_tol = 1e-6, double overlap_tol = 1e-8,
                double integrality_tol = 1e-6, double decay_bound = 100.0) const {
    for (const auto& name : region_names()) {
      const double cr = curvature_residual(name);
      if (cr > curvature_tol)
        throw CurvatureMismatchError(
            "connection " + id_ + ": curvature residual " + fmt_double(cr) + " in region " + name,
            cr);
      const double pd = pole_decay_defect(name);
      if (pd > decay_bound)
        throw DomainError("connection " + id_ + ": potential does not decay at the pole (ratio " +
                          fmt_double(pd) + ") in region " + name);
    }
    const double ov = overlap_residual();
    if (ov > overlap_tol)
      throw NumericalError("connection " + id_ + ": overlap inconsistency " + fmt_double(ov));
    const double in = integrality_defect();
    if (in > integrality_tol)
      throw NonIntegralClassError(
          "connection " + id_ + ": total curvature is not in 2*pi*Z (defect " + fmt_double(in) +
              ")",
          in);
  }

  /// Shift every region's potential by the same exact form (a gauge move at
  /// potential level).  Transition data is untouched: an exact global shift
  /// changes no frame relation.
  PrequantumConnection shifted(const DifferentialForm& shift, const std::string& new_id) const {
    if (hermitian_ && shift.reality() != Reality::real)
      throw HermitianViolationError("connection shift: hermitian potentials need a real shift");
    std::map<std::string, DifferentialForm> pots;
    for (const auto& [name, alpha] : potentials_) pots.emplace(name, alpha + shift);
    return PrequantumConnection(base_, std::move(pots), hermitian_, log_phase_, winding_, new_id);
  }

 private:
  SymplecticForm base_;
  std::map<std::string, DifferentialForm> potentials_;
  std::map<std::string, ScalarField> log_phase_;
  std::map<std::string, int> winding_;
  bool hermitian_ = true;
  std::string id_;
};

/// Pull a connection back through a map of the chart into itself: potentials
/// and frame phases compose with m, windings are topological and survive.
inline PrequantumConnection pullback_connection(const SmoothMap& m,
                                                const PrequantumConnection& conn,
                                                int nondeg_samples = 100) {
  if (m.target() != conn.chart())
    throw ChartMismatchError("pullback_connection: map target is not the connection chart");
  std::map<std::string, DifferentialForm> pots;
  std::map<std::string, ScalarField> phases;
  std::map<std::string, int> winds;
  for (const auto& name : conn.region_names()) {
    pots.emplace(name, pullback_form(m, conn.potential(name)));
    const ScalarField lam = conn.log_phase(name);
    phases[name] = ScalarField([lam, m](const Coords& p) { return lam(m(p)); }, lam.reality());
    winds[name] = conn.winding(name);
  }
  const SymplecticForm base =
      SymplecticForm::checked(pullback_form(m, conn.base().form()), nondeg_samples, 2);
  return PrequantumConnection(base, std::move(pots), conn.hermitian(), std::move(phases),
                              std::move(winds), conn.id() + "-pulled");
}

/// Difference of two connections with the same curvature, as the complex
/// 1-form of the affine structure: the full connection forms are -i*alpha,
/// so xi = -i(alpha_a - alpha_b).  For hermitian pairs xi is therefore
/// purely imaginary pointwise.
struct ConnectionDifference {
  DifferentialForm xi;
  double closedness_residual = 0.0;
  bool hermitian_pair = false;

  /// Wrap a directly supplied 1-form (e.g. the scripted c dtheta1 on the
  /// torus) as a difference, keeping it verbatim.
  static ConnectionDifference from_form(const DifferentialForm& raw, int samples = 64,
                                        std::uint64_t seed = 9) {
    if (raw.degree() != 1) throw DegreeError("connection difference: xi must be a 1-form");
    ConnectionDifference d;
    d.xi = raw;
    d.closedness_residual = exterior_derivative(raw).sup_norm(raw.chart().sample_points(samples, seed));
    d.hermitian_pair = false;
    return d;
  }
};

inline ConnectionDifference connection_difference(const PrequantumConnection& a,
                                                  const PrequantumConnection& b, int samples = 64,
                                                  std::uint64_t seed = 9) {
  if (a.chart() != b.chart())
    throw ChartMismatchError("connection_difference: different charts");
  if (a.region_names() != b.region_names())
    throw ChartMismatchError("connection_difference: different region structure");
  const auto pts = a.chart().sample_points(samples, seed);
  const double curv_gap = form_distance(a.base().form(), b.base().form(), pts);
  if (curv_gap > 1e-6)
    throw CurvatureMismatchError("connection_difference: not the same curvature (gap " +
                                     fmt_double(curv_gap) + ")",
                                 curv_gap);

  const auto names = a.region_names();
  const DifferentialForm first = a.potential(names[0]) - b.potential(names[0]);
  for (std::size_t i = 1; i < names.size(); ++i) {
    const DifferentialForm other = a.potential(names[i]) - b.potential(names[i]);
    const double gap = form_distance(other, first, pts);
    if (gap > 1e-8)
      throw NumericalError("connection_difference: region differences disagree by " +
                           fmt_double(gap));
  }

  ConnectionDifference d;
  d.xi = first * Complex(0, -1);
  d.closedness_residual = exterior_derivative(d.xi).sup_norm(pts);
  d.hermitian_pair = a.hermitian() && b.hermitian();
  return d;
}

}  // namespace prequant

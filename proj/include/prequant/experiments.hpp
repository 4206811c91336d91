#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "prequant/calculus.hpp"
#include "prequant/integrate.hpp"
#include "prequant/spectrum.hpp"

namespace prequant {

/// Shift a connection's potentials by the exact real form d(psi).  This is
/// the potential-level form of a gauge transformation and keeps curvature
/// and hermiticity.
inline PrequantumConnection shift_by_exact(const PrequantumConnection& conn,
                                           const ScalarField& psi, const std::string& tag) {
  DifferentialForm psi0(conn.chart(), 0);
  psi0.set(0, psi);
  return conn.shifted(exterior_derivative(psi0), conn.id() + "-" + tag);
}

/// Outcome of the spectrum-independence experiment: the Bohr-Sommerfeld
/// spectrum recomputed after each exact perturbation of the potential,
/// compared level-by-level against the unperturbed baseline.
struct IndependenceResult {
  BSSpectrum baseline;
  std::vector<double> deviations;  // per perturbation, sorted level-wise
  double max_deviation = 0.0;
};

/// Corollary-of-gauge-invariance experiment: perturbing the connection by
/// d(psi) must leave the spectrum unchanged.  Requires a simply connected
/// base chart family (ball or sphere cylinder), where every closed
/// perturbation is exact and the statement is unconditional.
inline IndependenceResult independence_experiment(const PrequantumConnection& conn,
                                                  const LagrangianFibration& fib,
                                                  const std::vector<ScalarField>& perturbations,
                                                  double grid_step = 0.02,
                                                  double root_tol = 1e-10) {
  if (conn.chart().name() == "torus")
    throw ConfigError("independence_experiment: base must have trivial first cohomology");
  IndependenceResult res;
  res.baseline = bs_spectrum(conn, fib, grid_step, root_tol);
  for (std::size_t i = 0; i < perturbations.size(); ++i) {
    const auto shifted =
        shift_by_exact(conn, perturbations[i], "pert" + std::to_string(i));
    const auto spec = bs_spectrum(shifted, fib, grid_step, root_tol);
    const double dev = spectrum_deviation(res.baseline, spec);
    res.deviations.push_back(dev);
    res.max_deviation = std::max(res.max_deviation, dev);
  }
  return res;
}

/// One row of the torus dichotomy experiment.
struct DichotomyCase {
  double c = 0.0;
  bool changed = false;           // measured: spectrum differs from baseline
  bool expected_changed = false;  // c not an integer within tolerance
  bool consistent = false;
};

struct DichotomyResult {
  BSSpectrum baseline;
  std::vector<DichotomyCase> cases;
  bool all_consistent = true;
};

/// The closed-but-not-exact dichotomy: shifting the torus potential by
/// c dtheta1 changes the Bohr-Sommerfeld spectrum exactly when the period
/// 2*pi*c is not a multiple of 2*pi.
inline DichotomyResult torus_counterexample(const PrequantumConnection& conn,
                                            const LagrangianFibration& fib,
                                            const std::vector<double>& c_values,
                                            double grid_step = 0.02, double root_tol = 1e-10,
                                            double integer_tol = 1e-6) {
  if (conn.chart().name() != "torus")
    throw ConfigError("torus_counterexample: connection must live on the torus");
  DichotomyResult res;
  res.baseline = bs_spectrum(conn, fib, grid_step, root_tol);
  for (double c : c_values) {
    DifferentialForm shift(conn.chart(), 1);
    shift.set(0b01, ScalarField::constant(Complex(c, 0)));
    const auto shifted = conn.shifted(shift, conn.id() + "-c" + fmt_double(c));
    const auto spec = bs_spectrum(shifted, fib, grid_step, root_tol);
    DichotomyCase row;
    row.c = c;
    row.changed = spectrum_deviation(res.baseline, spec) > 1e-6;
    row.expected_changed = std::abs(c - std::round(c)) > integer_tol;
    row.consistent = (row.changed == row.expected_changed);
    res.all_consistent = res.all_consistent && row.consistent;
    res.cases.push_back(row);
  }
  return res;
}

/// Index count for a prequantizable surface: round(total symplectic area
/// over 2*pi) + 1 - genus.  The class must be integral; the genus must
/// match the chart (sphere cylinder 0, torus 1).
inline int riemann_roch_surface(const SymplecticForm& omega, int genus, double class_tol = 1e-6,
                                int gl_order = 32, int trapezoid_nodes = 256) {
  const std::string& name = omega.chart().name();
  if (!((name == "sphere_cyl" && genus == 0) || (name == "torus" && genus == 1)))
    throw ConfigError("riemann_roch_surface: chart " + name + " does not carry genus " +
                      std::to_string(genus));
  const Complex total =
      integrate_form(omega.form(), Region::full(omega.chart()), gl_order, trapezoid_nodes);
  if (std::abs(total.imag()) > class_tol)
    throw NonIntegralClassError("riemann_roch_surface: symplectic class is not real",
                                total.imag());
  const double chern = total.real() / kTwoPi;
  if (std::abs(chern - std::round(chern)) > class_tol)
    throw NonIntegralClassError("riemann_roch_surface: class integral " +
                                    fmt_double(total.real()) +
                                    " is not a multiple of 2*pi",
                                total.real());
  return static_cast<int>(std::round(chern)) + 1 - genus;
}

}  // namespace prequant

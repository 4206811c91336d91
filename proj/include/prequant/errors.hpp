#pragma once

#include <stdexcept>
#include <string>

#include "prequant/common.hpp"

namespace prequant {

/// Root of the library's error hierarchy.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed config, unknown key, unknown scenario, invalid
/// chart data.  The CLI maps this family to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

/// Numerical failure inside an operation (escape, singularity, obstruction).
/// The CLI maps this family to exit code 3.
struct NumericalError : Error {
  using Error::Error;
};

/// Evaluation or region outside chart bounds.
struct DomainError : NumericalError {
  using NumericalError::NumericalError;
};

/// Objects living on different charts were combined.
struct ChartMismatchError : NumericalError {
  using NumericalError::NumericalError;
};

/// Degree arithmetic went out of range (wedge above top degree, etc.).
struct DegreeError : NumericalError {
  using NumericalError::NumericalError;
};

/// A coefficient matrix that must be invertible is numerically singular.
struct DegenerateFormError : NumericalError {
  using NumericalError::NumericalError;
};

/// A primitive was requested for a 2-form with nonzero total integral.
struct CohomologyObstructionError : NumericalError {
  CohomologyObstructionError(const std::string& msg, Complex total)
      : NumericalError(msg), total_integral(total) {}
  Complex total_integral;
};

/// A closed 1-form has a nonzero period around some probe loop, so no global
/// potential function exists.  Carries the offending loop and its period.
struct H1ObstructionError : NumericalError {
  H1ObstructionError(const std::string& msg, int loop, Complex p)
      : NumericalError(msg), loop_index(loop), period(p) {}
  int loop_index;
  Complex period;
};

/// Generator periods are not integer multiples of 2*pi, so no circle-valued
/// potential exists either.
struct NonIntegralPeriodError : NumericalError {
  NonIntegralPeriodError(const std::string& msg, Complex p)
      : NumericalError(msg), period(p) {}
  Complex period;
};

/// A trajectory left the chart bounds or entered the pole exclusion band.
struct FlowEscapeError : NumericalError {
  FlowEscapeError(const std::string& msg, const Coords& p, double t)
      : NumericalError(msg), point(p), time(t) {}
  Coords point;
  double time;
};

/// The normalizing flow left the requested ball; retry with a smaller radius.
struct ChartRadiusError : NumericalError {
  ChartRadiusError(const std::string& msg, double suggested)
      : NumericalError(msg), suggested_radius(suggested) {}
  double suggested_radius;
};

/// Two connections do not have the same curvature, so their difference is not
/// a closed form.
struct CurvatureMismatchError : NumericalError {
  CurvatureMismatchError(const std::string& msg, double r)
      : NumericalError(msg), residual(r) {}
  double residual;
};

/// Two independent path families disagreed beyond tolerance while integrating
/// a supposedly exact form.
struct PathDependenceError : NumericalError {
  PathDependenceError(const std::string& msg, double d)
      : NumericalError(msg), disagreement(d) {}
  double disagreement;
};

/// An imaginary-valued gauge function was required but a real part was found.
struct HermitianViolationError : NumericalError {
  using NumericalError::NumericalError;
};

/// The level-scan grid cannot separate adjacent roots of the phase function.
struct RefinementError : NumericalError {
  using NumericalError::NumericalError;
};

/// Holonomy was requested on a singular level of a fibration.
struct SingularLevelError : NumericalError {
  using NumericalError::NumericalError;
};

/// A cohomology class that must be 2*pi-integral is not.
struct NonIntegralClassError : NumericalError {
  NonIntegralClassError(const std::string& msg, double integral)
      : NumericalError(msg), total_integral(integral) {}
  double total_integral;
};

}  // namespace prequant

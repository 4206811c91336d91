#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "prequant/connection.hpp"
#include "prequant/holonomy.hpp"
#include "prequant/path.hpp"

namespace prequant {

/// Real polarization of a model chart: a one-parameter family of Lagrangian
/// leaves indexed by a base interval, with each regular leaf presented by
/// its generating loops.  Sphere leaves are latitude circles (one generator);
/// torus leaves carry both generator circles, since triviality of a bundle
/// over a torus leaf is a condition on every generator.
struct LagrangianFibration {
  Chart chart;
  double base_lo = 0.0;
  double base_hi = 0.0;
  bool base_periodic = false;
  std::vector<double> singular_levels;
  std::string base_label;
  /// Closed generator loops of the leaf over base value b, scheduled in the
  /// named trivialization region.
  std::function<std::vector<PathInChart>(double, const std::string&)> leaf_loops;

  /// Height-function polarization of the sphere: leaves are latitudes,
  /// degenerating to points at the poles.
  static LagrangianFibration sphere_height() {
    LagrangianFibration fib;
    fib.chart = Chart::sphere_cyl();
    fib.base_lo = -1.0;
    fib.base_hi = 1.0;
    fib.base_periodic = false;
    fib.singular_levels = {-1.0, 1.0};
    fib.base_label = "z";
    const Chart chart = fib.chart;
    fib.leaf_loops = [chart](double b, const std::string& region) {
      return std::vector<PathInChart>{PathInChart::latitude(chart, b, region)};
    };
    return fib;
  }

  /// Linear polarization of the torus by theta1-circles, indexed by theta2.
  /// No singular leaves; every leaf is regular.
  static LagrangianFibration torus_lines() {
    LagrangianFibration fib;
    fib.chart = Chart::torus();
    fib.base_lo = 0.0;
    fib.base_hi = kTwoPi;
    fib.base_periodic = true;
    fib.base_label = "theta2";
    const Chart chart = fib.chart;
    fib.leaf_loops = [chart](double b, const std::string& region) {
      return std::vector<PathInChart>{
          PathInChart::torus_loop(chart, 0, Coords{0.0, b}, region),
          PathInChart::torus_loop(chart, 1, Coords{0.0, b}, region)};
    };
    return fib;
  }

  /// Distance from b to the nearest singular level (infinity when none).
  double singular_distance(double b) const {
    double d = std::numeric_limits<double>::infinity();
    for (double s : singular_levels) d = std::min(d, std::abs(b - s));
    return d;
  }

  void require_regular(double b, double singular_tol = 1e-6) const {
    if (!base_periodic && (b < base_lo || b > base_hi))
      throw DomainError("fibration: base value " + fmt_double(b) + " outside [" +
                        fmt_double(base_lo) + ", " + fmt_double(base_hi) + "]");
    if (singular_distance(b) <= singular_tol)
      throw SingularLevelError("fibration: base value " + fmt_double(b) +
                               " is within " + fmt_double(singular_tol) +
                               " of a singular level");
  }
};

namespace detail {

/// Trivialization region used for leaf loops: the northern chart when the
/// connection has one, otherwise the first region in sorted order.
inline std::string leaf_region(const PrequantumConnection& conn) {
  const auto names = conn.region_names();
  for (const auto& n : names)
    if (n == "north") return n;
  return names.front();
}

}  // namespace detail

/// Holonomy of the connection around each generator loop of the leaf at
/// base value b.  One entry for sphere latitudes, two for torus leaves.
inline std::vector<Complex> leaf_holonomy(const PrequantumConnection& conn,
                                          const LagrangianFibration& fib, double b,
                                          double singular_tol = 1e-6) {
  if (conn.chart() != fib.chart)
    throw ChartMismatchError("leaf_holonomy: connection and fibration charts differ");
  fib.require_regular(b, singular_tol);
  const std::string region = detail::leaf_region(conn);
  std::vector<Complex> hols;
  for (const auto& loop : fib.leaf_loops(b, region)) hols.push_back(holonomy(conn, loop));
  return hols;
}

}  // namespace prequant

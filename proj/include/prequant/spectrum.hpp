#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "prequant/fibration.hpp"

namespace prequant {

/// One Bohr-Sommerfeld level: a base value whose leaf carries trivial
/// holonomy.  Singular levels are echoed with NaN holonomy -- they are
/// endpoints of the base interval, not roots.
struct Level {
  double value = 0.0;
  Complex holonomy{std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
  double residual = std::numeric_limits<double>::quiet_NaN();
};

/// Bohr-Sommerfeld spectrum of a connection with respect to a polarization.
/// `continuum` flags the degenerate torus case where every leaf is integral
/// and the spectrum is the whole base rather than a list.
struct BSSpectrum {
  std::string connection_id;
  std::vector<Level> regular;
  std::vector<Level> singular;
  bool continuum = false;
  /// Scan of the primary generator's unwrapped holonomy phase over the base
  /// grid, for plotting: (base value, phase / 2*pi).
  std::vector<std::pair<double, double>> phase_scan;

  /// Regular plus singular level count.
  int total_count() const { return static_cast<int>(regular.size() + singular.size()); }
};

namespace detail {

/// Principal branch difference: the representative of b - a in (-pi, pi].
inline double principal_delta(double a, double b) {
  double d = std::fmod(b - a, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  if (d > kPi) d -= kTwoPi;
  return d;
}

/// Number of multiples of 2*pi in the closed interval between u and v
/// (order-free), counting an endpoint hit once.
inline int integer_crossings(double u, double v) {
  const double lo = std::min(u, v) / kTwoPi;
  const double hi = std::max(u, v) / kTwoPi;
  return std::max(0, static_cast<int>(std::floor(hi) - std::ceil(lo)) + 1);
}

}  // namespace detail

/// Scan leaf holonomy over the base grid and locate the Bohr-Sommerfeld
/// levels as roots of the unwrapped phase against multiples of 2*pi.
/// The phase is tracked continuously along the grid (no principal-branch
/// jumps); a cell crossing more than one multiple, or swinging by more than
/// pi, is reported as unresolvable at this grid step.  On multi-generator
/// leaves a root must leave every generator's holonomy at 1.
inline BSSpectrum bs_spectrum(const PrequantumConnection& conn, const LagrangianFibration& fib,
                              double grid_step = 0.02, double root_tol = 1e-10,
                              double level_tol = 1e-6) {
  if (conn.chart() != fib.chart)
    throw ChartMismatchError("bs_spectrum: connection and fibration charts differ");
  if (grid_step <= 0 || root_tol <= 0) throw ConfigError("bs_spectrum: steps must be positive");

  // Base grid.  Non-periodic bases are padded away from the singular ends
  // far enough that leaf loops clear the chart's exclusion bands.
  double pad = 0.0;
  if (!fib.base_periodic) {
    for (int i = 0; i < fib.chart.dim(); ++i)
      pad = std::max(pad, 2.0 * fib.chart.coord(i).exclusion);
    pad = std::max(pad, 2e-6);
  }
  const double lo = fib.base_lo + pad;
  const double hi = fib.base_hi - (fib.base_periodic ? 0.0 : pad);
  std::vector<double> grid;
  for (double b = lo; b < hi - 1e-12; b += grid_step) grid.push_back(b);
  if (fib.base_periodic) {
    grid.push_back(hi);  // wrap cell closes the circle at lo + period
  } else if (grid.empty() || grid.back() < hi - 1e-12) {
    grid.push_back(hi);
  }
  if (grid.size() < 2) throw ConfigError("bs_spectrum: grid step too large for the base");

  const std::string region = detail::leaf_region(conn);
  const auto hols_at = [&](double b) {
    const double bb = fib.base_periodic ? std::fmod(b + kTwoPi, kTwoPi) : b;
    std::vector<Complex> hs;
    for (const auto& loop : fib.leaf_loops(bb, region)) hs.push_back(holonomy(conn, loop));
    return hs;
  };

  // Holonomies of every generator at every node, and the primary
  // generator's unwrapped phase.
  std::vector<std::vector<Complex>> node_hols;
  node_hols.reserve(grid.size());
  for (double b : grid) node_hols.push_back(hols_at(b));
  const std::size_t gens = node_hols.front().size();

  std::vector<double> phase(grid.size());
  phase[0] = std::arg(node_hols[0][0]);
  for (std::size_t j = 1; j < grid.size(); ++j)
    phase[j] = phase[j - 1] + detail::principal_delta(std::arg(node_hols[j - 1][0]),
                                                      std::arg(node_hols[j][0]));

  BSSpectrum spec;
  spec.connection_id = conn.id();
  for (double s : fib.singular_levels) spec.singular.push_back(Level{s});
  std::sort(spec.singular.begin(), spec.singular.end(),
            [](const Level& a, const Level& b) { return a.value < b.value; });
  spec.phase_scan.reserve(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    spec.phase_scan.push_back({grid[j], phase[j] / kTwoPi});

  // Degenerate branches: the primary phase sits on a multiple of 2*pi at
  // every node.  Either every generator is integral everywhere (a continuum
  // of integral leaves) or a transverse generator obstructs everywhere
  // (empty spectrum); in neither case is there anything to root-find.
  const auto primary_flat = [&]() {
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (std::abs(node_hols[j][0] - Complex(1, 0)) > level_tol) return false;
    return true;
  }();
  if (primary_flat) {
    spec.continuum = std::all_of(
        node_hols.begin(), node_hols.end(), [&](const std::vector<Complex>& hs) {
          return std::all_of(hs.begin(), hs.end(), [&](const Complex& h) {
            return std::abs(h - Complex(1, 0)) <= level_tol;
          });
        });
    return spec;
  }

  // Root finding per cell.
  std::vector<double> roots;
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const double dpsi = phase[j + 1] - phase[j];
    const int crossings = detail::integer_crossings(phase[j], phase[j + 1]);
    if (crossings >= 2 || std::abs(dpsi) >= kPi)
      throw RefinementError("bs_spectrum: grid step " + fmt_double(grid_step) +
                            " cannot separate roots near base " + fmt_double(grid[j]));
    if (crossings == 0) continue;

    const double target = kTwoPi * std::round(((phase[j] + phase[j + 1]) / 2.0) / kTwoPi);
    // Continuous in-cell phase relative to the left node; |dpsi| < pi keeps
    // the principal correction faithful.
    const double ref = std::arg(node_hols[j][0]);
    const auto f = [&](double b) {
      return phase[j] + detail::principal_delta(ref, std::arg(hols_at(b)[0])) - target;
    };
    double a = grid[j], b = grid[j + 1];
    double fa = phase[j] - target, fb = phase[j + 1] - target;
    if (fa == 0.0) {
      roots.push_back(a);
      continue;
    }
    if (fb == 0.0) {
      roots.push_back(b);
      continue;
    }
    if (fa * fb > 0.0) continue;  // endpoint grazing already counted in a neighbor
    while (b - a > root_tol) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (fm == 0.0) {
        a = b = m;
        break;
      }
      if (fa * fm < 0.0) {
        b = m;
        fb = fm;
      } else {
        a = m;
        fa = fm;
      }
    }
    roots.push_back(0.5 * (a + b));
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique_roots;
  for (double r : roots)
    if (unique_roots.empty() || r - unique_roots.back() > 1e-8) unique_roots.push_back(r);

  for (double r : unique_roots) {
    const auto hs = hols_at(r);
    double residual = 0.0;
    for (const auto& h : hs) residual = std::max(residual, std::abs(h - Complex(1, 0)));
    if (gens > 1 && residual > level_tol) continue;  // transverse generator obstructs
    spec.regular.push_back(Level{fib.base_periodic ? std::fmod(r + kTwoPi, kTwoPi) : r,
                                 hs[0], residual});
  }
  std::sort(spec.regular.begin(), spec.regular.end(),
            [](const Level& a, const Level& b) { return a.value < b.value; });
  return spec;
}

/// Sorted level-wise distance between two spectra.  Infinite when the shapes
/// differ (different counts or continuum flags) -- equality is a structural
/// statement, not a set distance.
inline double spectrum_deviation(const BSSpectrum& a, const BSSpectrum& b) {
  if (a.continuum != b.continuum || a.regular.size() != b.regular.size())
    return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.regular.size(); ++i)
    d = std::max(d, std::abs(a.regular[i].value - b.regular[i].value));
  return d;
}

}  // namespace prequant

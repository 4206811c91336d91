#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "prequant/chart.hpp"
#include "prequant/common.hpp"
#include "prequant/errors.hpp"

namespace prequant {

/// One contiguous parameter interval of a path together with the potential
/// region whose trivialization is in force there.
struct RegionPiece {
  double t0 = 0.0;
  double t1 = 1.0;
  std::string region = "main";
};

/// Curve in a chart, parametrized over [0,1] in raw (unreduced) coordinates
/// so angular coordinates may wind.  Carries a region schedule saying which
/// potential region applies on which subinterval; switches must happen at
/// points where both regions are valid (anywhere outside the pole bands on
/// the model charts).
class PathInChart {
 public:
  using Curve = std::function<Coords(double)>;

  PathInChart(Chart chart, Curve gamma, bool closed,
              std::vector<RegionPiece> schedule = {RegionPiece{}}, Curve velocity = nullptr)
      : chart_(std::move(chart)),
        gamma_(std::move(gamma)),
        velocity_(std::move(velocity)),
        closed_(closed),
        schedule_(std::move(schedule)) {
    if (schedule_.empty()) throw ConfigError("path: empty region schedule");
    double cursor = 0.0;
    for (const auto& piece : schedule_) {
      if (std::abs(piece.t0 - cursor) > 1e-12 || piece.t1 <= piece.t0)
        throw ConfigError("path: region schedule must cover [0,1] contiguously");
      cursor = piece.t1;
    }
    if (std::abs(cursor - 1.0) > 1e-12)
      throw ConfigError("path: region schedule must end at t = 1");

    // Sampled validation: stay inside bounds and outside the pole band.
    for (int j = 0; j <= 64; ++j) {
      const Coords p = chart_.reduce(gamma_(j / 64.0));
      chart_.require_inside(p, "path");
      if (chart_.in_exclusion_band(p))
        throw DomainError("path enters the pole exclusion band at t = " + fmt_double(j / 64.0));
    }
    if (closed_) {
      const Coords d = chart_.displacement(gamma_(1.0), gamma_(0.0));
      if (d.norm() > 1e-9)
        throw ConfigError("path: closed flag set but endpoints differ by " + fmt_double(d.norm()));
    }
  }

  /// Latitude loop on the sphere cylinder: theta runs once around at fixed z.
  static PathInChart latitude(const Chart& chart, double z, std::string region = "north") {
    return PathInChart(
        chart, [z](double t) { return Coords{kTwoPi * t, z}; }, true,
        {RegionPiece{0.0, 1.0, std::move(region)}},
        [](double) { return Coords{kTwoPi, 0.0}; });
  }

  /// Generator circle of the torus (or any fully periodic chart): coordinate
  /// `axis` runs once around, the others held at `base`.
  static PathInChart torus_loop(const Chart& chart, int axis, const Coords& base,
                                std::string region = "main") {
    if (axis < 0 || axis >= chart.dim() || !chart.is_periodic(axis))
      throw ConfigError("torus_loop: axis must be a periodic coordinate");
    const double period = chart.coord(axis).period();
    Coords vel = Coords::zeros(chart.dim());
    vel[axis] = period;
    return PathInChart(
        chart,
        [axis, base, period](double t) {
          Coords p = base;
          p[axis] += period * t;
          return p;
        },
        true, {RegionPiece{0.0, 1.0, std::move(region)}}, [vel](double) { return vel; });
  }

  const Chart& chart() const { return chart_; }
  bool closed() const { return closed_; }
  const std::vector<RegionPiece>& schedule() const { return schedule_; }

  Coords at(double t) const { return gamma_(t); }

  /// Velocity d(gamma)/dt, analytic when supplied; otherwise central
  /// differences on the raw (continuous) parametrization.
  Coords velocity(double t) const {
    if (velocity_) return velocity_(t);
    const double h = 1e-6;
    double a = t - h, b = t + h;
    if (a < 0) { a = 0; b = 2 * h; }
    if (b > 1) { b = 1; a = 1 - 2 * h; }
    return (gamma_(b) - gamma_(a)) * (1.0 / (b - a));
  }

  /// The same geometric loop with a different region schedule.
  PathInChart with_schedule(std::vector<RegionPiece> schedule) const {
    return PathInChart(chart_, gamma_, closed_, std::move(schedule), velocity_);
  }

 private:
  Chart chart_;
  Curve gamma_;
  Curve velocity_;
  bool closed_ = false;
  std::vector<RegionPiece> schedule_;
};

}  // namespace prequant

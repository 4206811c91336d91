#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "prequant/common.hpp"
#include "prequant/errors.hpp"

namespace prequant {

enum class CoordKind { interval, periodic };

struct CoordSpec {
  CoordKind kind = CoordKind::interval;
  double lo = 0.0;
  double hi = 1.0;           // for periodic coords, hi = lo + period
  double exclusion = 0.0;    // margin near interval ends where flows/paths must not go
  std::string label;

  double period() const { return hi - lo; }
};

/// Coordinate chart.  Three models are supported: a star-shaped ball ("disk",
/// dim 2 or 4), the cylindrical sphere chart (theta periodic, z in [-1,1] with
/// a pole exclusion band), and the flat torus (both coords periodic).  A
/// 1-dimensional periodic chart models the standard circle.
class Chart {
 public:
  Chart() = default;

  static Chart disk(int dim = 2, double radius = 1.0) {
    if (dim != 2 && dim != 4) throw ConfigError("disk chart: dim must be 2 or 4");
    if (radius <= 0) throw ConfigError("disk chart: radius must be positive");
    Chart c;
    c.name_ = dim == 2 ? "disk" : "disk4";
    c.ball_radius_ = radius;
    static const char* labels[] = {"x", "y", "u", "v"};
    for (int i = 0; i < dim; ++i)
      c.coords_.push_back({CoordKind::interval, -radius, radius, 0.0, labels[i]});
    return c;
  }

  static Chart sphere_cyl(double exclusion_band = 1e-3) {
    if (exclusion_band <= 0 || exclusion_band >= 1)
      throw ConfigError("sphere chart: exclusion band must lie in (0,1)");
    Chart c;
    c.name_ = "sphere_cyl";
    c.closed_ = true;  // z endpoints are compactified poles, not boundary
    c.coords_.push_back({CoordKind::periodic, 0.0, kTwoPi, 0.0, "theta"});
    c.coords_.push_back({CoordKind::interval, -1.0, 1.0, exclusion_band, "z"});
    return c;
  }

  static Chart torus() {
    Chart c;
    c.name_ = "torus";
    c.closed_ = true;
    c.coords_.push_back({CoordKind::periodic, 0.0, kTwoPi, 0.0, "theta1"});
    c.coords_.push_back({CoordKind::periodic, 0.0, kTwoPi, 0.0, "theta2"});
    return c;
  }

  static Chart circle() {
    Chart c;
    c.name_ = "circle";
    c.closed_ = true;
    c.coords_.push_back({CoordKind::periodic, 0.0, kTwoPi, 0.0, "theta"});
    return c;
  }

  /// Ad-hoc chart used as the parameter space of integration regions.
  static Chart parameter_box(const std::vector<CoordSpec>& dims) {
    Chart c;
    c.name_ = "param";
    c.coords_ = dims;
    return c;
  }

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const CoordSpec& coord(int i) const { return coords_[i]; }
  bool is_periodic(int i) const { return coords_[i].kind == CoordKind::periodic; }
  bool is_ball() const { return ball_radius_ > 0; }
  double ball_radius() const { return ball_radius_; }
  /// True when the chart models a closed total space (sphere cylinder, torus,
  /// circle).  Integral cohomology conditions apply only on such charts.
  bool compact() const { return closed_; }

  bool operator==(const Chart& o) const { return name_ == o.name_ && dim() == o.dim(); }
  bool operator!=(const Chart& o) const { return !(*this == o); }

  /// Wrap periodic coordinates into [lo, lo+period).
  Coords reduce(const Coords& p) const {
    Coords q = p;
    for (int i = 0; i < dim(); ++i) {
      if (!is_periodic(i)) continue;
      const double P = coords_[i].period();
      q[i] = p[i] - P * std::floor((p[i] - coords_[i].lo) / P);
    }
    return q;
  }

  /// Signed displacement a - b with periodic components reduced to the
  /// shortest representative (-P/2, P/2].
  Coords displacement(const Coords& a, const Coords& b) const {
    Coords d = a - b;
    for (int i = 0; i < dim(); ++i) {
      if (!is_periodic(i)) continue;
      const double P = coords_[i].period();
      d[i] = d[i] - P * std::round(d[i] / P);
    }
    return d;
  }

  /// Inside the closed chart bounds (after reduction of periodic coords)?
  /// The pole exclusion band is deliberately not part of this test; see
  /// in_exclusion_band for the flow/path-level check.
  bool contains(const Coords& p, double slack = 1e-12) const {
    if (p.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (is_periodic(i)) continue;
      if (p[i] < coords_[i].lo - slack || p[i] > coords_[i].hi + slack) return false;
    }
    if (is_ball()) {
      double r2 = 0;
      for (int i = 0; i < dim(); ++i) r2 += p[i] * p[i];
      if (r2 > (ball_radius_ + slack) * (ball_radius_ + slack)) return false;
    }
    return true;
  }

  bool in_exclusion_band(const Coords& p) const {
    for (int i = 0; i < dim(); ++i) {
      const auto& s = coords_[i];
      if (s.kind != CoordKind::interval || s.exclusion <= 0) continue;
      if (p[i] > s.hi - s.exclusion || p[i] < s.lo + s.exclusion) return true;
    }
    return false;
  }

  void require_inside(const Coords& p, const char* what) const {
    if (!contains(p))
      throw DomainError(std::string(what) + ": point " + p.str() +
                        " outside bounds of chart " + name_);
  }

  /// Deterministic sample cloud, avoiding exclusion bands plus an optional
  /// extra margin (flow seeds need headroom).  Ball charts use rejection.
  std::vector<Coords> sample_points(int n, std::uint64_t seed, double margin = 0.0) const {
    UniformStream rng(seed * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull);
    std::vector<Coords> out;
    out.reserve(n);
    while (static_cast<int>(out.size()) < n) {
      Coords p = Coords::zeros(dim());
      for (int i = 0; i < dim(); ++i) {
        const auto& s = coords_[i];
        if (s.kind == CoordKind::periodic) {
          p[i] = rng.next(s.lo, s.hi);
        } else {
          const double pad = s.exclusion + margin;
          p[i] = rng.next(s.lo + pad, s.hi - pad);
        }
      }
      if (is_ball()) {
        double r2 = 0;
        for (int i = 0; i < dim(); ++i) r2 += p[i] * p[i];
        const double rmax = ball_radius_ * (1.0 - 1e-6) - margin;
        if (r2 > rmax * rmax) continue;
      }
      out.push_back(p);
    }
    return out;
  }

 private:
  std::string name_;
  std::vector<CoordSpec> coords_;
  double ball_radius_ = 0.0;
  bool closed_ = false;
};

/// A point tagged with the chart it lives on.
struct Point {
  std::string chart;
  Coords coords;
};

inline Point make_point(const Chart& c, const Coords& x) {
  c.require_inside(c.reduce(x), "make_point");
  return Point{c.name(), x};
}

}  // namespace prequant

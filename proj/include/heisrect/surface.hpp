#pragma once

#include <memory>
#include <string>
#include <vector>

#include "heisrect/group.hpp"

namespace heisrect {

// Piecewise-linear profile through (knots[i], values[i]), extended by the
// end values outside the knot range.
class FlagProfile {
 public:
  FlagProfile() = default;
  FlagProfile(std::vector<double> knots, std::vector<double> values);
  static FlagProfile linear(double slope, double half_width);
  // -|y| near the origin, back to 0 at |y| = 2; slopes +-1.
  static FlagProfile tent();

  double operator()(double y) const;
  // exact integral from a to b
  double integral(double a, double b) const;
  double lipschitz() const;
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> knots_, values_;
};

// Values of phi on a regular (y, t) grid for n = 1, bilinear in between,
// zero outside.
struct TabulatedGrid {
  double y0 = -1.0, y1 = 1.0, t0 = -1.0, t1 = 1.0;
  int ny = 2, nt = 2;
  std::vector<double> values;  // row-major, t index fastest
};

struct Regularity {
  double alpha = 1.0;
  double H = 1.0;
  double L = 1.0;
  double support_radius = 1.0;
};

enum class SurfaceKind { Constant, BigolinVittone, Flag, Bump, Tabulated, Rescaled };

// phi : W -> V, stored as an immutable shared value.
class SurfaceFn {
 public:
  static SurfaceFn constant(int n, double c);
  // -t^a/(1-a) for t >= 0, times a C^2 cutoff equal to 1 on the box
  // |x_j|, |t| <= window and 0 outside twice that box.
  static SurfaceFn bigolin_vittone(int n, double a, double window = 2.0);
  // phi(w) = psi(x_{n+1})
  static SurfaceFn flag(int n, FlagProfile psi);
  // amplitude * (1 - r^2)^3 inside r < 1, r^2 = |y|^2/s^2 + t^2/s^4
  static SurfaceFn bump(int n, double amplitude, double radius);
  static SurfaceFn tabulated(TabulatedGrid grid, Regularity declared);

  // (1/r) phi(delta_r w)
  SurfaceFn rescaled(double r) const;
  SurfaceFn with_declared(Regularity r) const;

  double operator()(const WPoint& w) const;

  int n() const;
  SurfaceKind kind() const;
  std::string kind_name() const;
  const Regularity& declared() const;
  bool t_independent() const;
  // non-null for Flag surfaces
  const FlagProfile* profile() const;
  // BigolinVittone exponent, or 0
  double bv_exponent() const;
  double constant_value() const;

  struct Impl;

 private:
  explicit SurfaceFn(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// C^2 step: 1 for u <= 1, 0 for u >= 2.
double cutoff_step(double u);

}  // namespace heisrect

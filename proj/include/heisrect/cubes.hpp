#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "heisrect/group.hpp"

namespace heisrect {

// Shrink factor making every level-n box have diam_G < 2^-n in the parabolic plane.
inline constexpr double kCubeSigma = 0.25;

double horizontal_side(int level);  // sigma 2^-level
double vertical_side(int level);    // sigma^2 4^-level

// Axis order used for boxes and indices: z_1..z_{2n-2}, s, then t.
int axis_count(int n);
std::vector<double> axis_coords(const GPoint& g);
GPoint from_axis_coords(int n, const std::vector<double>& c);

struct CubeIndex {
  int level = 0;
  std::vector<std::int64_t> idx;

  CubeIndex parent() const;
  bool operator==(const CubeIndex& o) const = default;
};

struct Box {
  std::vector<double> lo, hi;

  int axes() const { return static_cast<int>(lo.size()); }
  // half-open: closed on the lower faces
  bool contains(const std::vector<double>& c) const;
  double volume() const;
  std::vector<double> center() const;
};

struct Cube {
  CubeIndex index;
  Box box;
  GPoint center;
};

// Anisotropic dyadic boxes anchored at the origin, restricted to a root region.
class DyadicGrid {
 public:
  explicit DyadicGrid(int n);  // root region [-1, 1] on every axis
  DyadicGrid(int n, Box root);

  int n() const { return n_; }
  const Box& root() const { return root_; }
  CubeIndex cube_of_point(const GPoint& g, int level) const;
  Cube cube(const CubeIndex& i) const;

 private:
  int n_;
  Box root_;
};

// Largest |z| over a box (0 for the parabolic plane, which has no z).
double twist_bound(int n, const Box& b);

// Smallest Korányi length d able to move the t coordinate by g when |z| <= z:
// the root of d^2/4 + z d / 2 = g.  For z = 0 this is 2 sqrt(g).
double vertical_reach(double g, double z);
// Inverse of vertical_reach in g.
double vertical_margin(double d, double z);

// Certified lower bound for dist_G(q, complement of Q).
double dist_lower_bound_to_complement(const GPoint& q, const Cube& Q);
// Certified upper bound for diam_G(Q).
double diameter_bound(int n, const Box& b, double z);

struct CoreBox {
  Box box;
  bool empty = false;
};
// {q in Q : certified distance to the complement >= rho 2^-level}, intersected with
// the parent core when given.  z overrides the twist bound of Q when larger.
CoreBox prune_boundary(const Cube& Q, double rho, const Box* parent_core = nullptr, double z = 0.0);

// One coordinate axis of a fat Cantor construction.  Cores are products of
// one interval per axis, so every axis carries its own nested family.
struct AxisCell {
  std::int64_t index = 0;  // global dyadic index along the axis
  double lo = 0.0, hi = 0.0;          // the cell
  double core_lo = 0.0, core_hi = 0.0;  // surviving core
  std::int32_t first_child = 0, children = 0;
};

struct AxisLevel {
  double margin = 0.0;  // pruning width along this axis
  std::vector<AxisCell> cells;
  double kept_length() const;
  // least gap between consecutive cores; +inf with fewer than two cells
  double min_gap() const;
};

struct AxisFamily {
  int split = 2;  // children per cell
  std::vector<AxisLevel> levels;  // levels[k] is level n0 + k
  // first-order series for the kept fraction: exact while margins shrink with the level
  double predicted_fraction(int upto) const;
};

struct CantorParams {
  int n = 1;
  int n0 = 2;
  int nmax = 12;
  double alpha = 0.5;
  std::optional<double> tau;  // empty: automatic rule
  GPoint x0;
};

struct CantorLevel {
  int level = 0;
  double cubes_alive = 0.0;
  double measure_kept = 0.0;   // relative to mu(Q0)
  double loss = 0.0;           // relative measure removed at this level
  double loss_bound = 0.0;     // C_level tau 2^-level eps
  double min_separation = 0.0;
  double required_separation = 0.0;
  double diameter = 0.0;       // certified bound over every cube of the level
  bool separated = true;
  bool diameter_ok = true;
};

struct CantorRealization {
  int n = 1, n0 = 0, nmax = 0;
  double epsilon = 0.0, tau = 0.0;
  double twist = 0.0;  // |z| bound over the root cube
  Cube root;
  std::vector<AxisFamily> axes;  // axis order as in axis_coords
  std::vector<CantorLevel> levels;
  double measure_root = 0.0;  // mu(Q0)
  double measure_kept = 0.0;  // absolute
  double measure_ball = 0.0;  // mu(B(x0, 1))
  double predicted_kept = 0.0;  // series prediction, relative to mu(Q0)
};

// Per-level boundary constant: relative loss of a level-k cube <= C_k rho_k for rho_k <= 1.
double boundary_constant(int n, int level, double twist);
// tau with sum_k C_k tau 2^{-k eps} = 1/2 (infinite series when untwisted, else up to nmax).
double auto_tau(int n, int n0, int nmax, double epsilon, double twist);
double unit_ball_measure(int n);

CantorRealization build_fat_cantor(const CantorParams& p);

// A kept point and its chain of cores: cell[axis][k] indexes levels[k] of that axis' family.
struct KeptPoint {
  GPoint g;
  std::vector<std::vector<std::int32_t>> cell;
};
Box core_box(const CantorRealization& c, const KeptPoint& k, int level);
GPoint core_center(const CantorRealization& c, const KeptPoint& k, int level);
// Seeded random descent through surviving children; duplicates removed.
std::vector<KeptPoint> sample_kept_points(const CantorRealization& c, int count, std::uint64_t seed);

}  // namespace heisrect

#include "heisrect/cubes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "heisrect/errors.hpp"
#include "heisrect/sampling.hpp"

namespace heisrect {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

double side_along(int n, int axis, int level) {
  return axis == axis_count(n) - 1 ? vertical_side(level) : horizontal_side(level);
}

Box sized_box(int n, int level) {
  Box b;
  for (int a = 0; a < axis_count(n); ++a) {
    b.lo.push_back(0.0);
    b.hi.push_back(side_along(n, a, level));
  }
  return b;
}

}  // namespace

double horizontal_side(int level) { return std::ldexp(kCubeSigma, -level); }
double vertical_side(int level) { return std::ldexp(kCubeSigma * kCubeSigma, -2 * level); }

int axis_count(int n) { return 2 * n; }

std::vector<double> axis_coords(const GPoint& g) {
  std::vector<double> c(g.z.begin(), g.z.begin() + g.zdim());
  c.push_back(g.s);
  c.push_back(g.t);
  return c;
}

GPoint from_axis_coords(int n, const std::vector<double>& c) {
  if (static_cast<int>(c.size()) != axis_count(n)) throw UsageError("axis coordinate count does not match n");
  GPoint g(n);
  for (int i = 0; i < g.zdim(); ++i) g.z[i] = c[i];
  g.s = c[g.zdim()];
  g.t = c.back();
  return g;
}

CubeIndex CubeIndex::parent() const {
  if (level <= 0) throw UsageError("level-0 cubes have no parent");
  CubeIndex p{level - 1, idx};
  for (std::size_t a = 0; a + 1 < p.idx.size(); ++a) p.idx[a] = floor_div(idx[a], 2);
  p.idx.back() = floor_div(idx.back(), 4);
  return p;
}

bool Box::contains(const std::vector<double>& c) const {
  for (int a = 0; a < axes(); ++a)
    if (!(c[a] >= lo[a] && c[a] < hi[a])) return false;
  return true;
}

double Box::volume() const {
  double v = 1.0;
  for (int a = 0; a < axes(); ++a) v *= std::max(0.0, hi[a] - lo[a]);
  return v;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (int a = 0; a < axes(); ++a) c[a] = 0.5 * (lo[a] + hi[a]);
  return c;
}

DyadicGrid::DyadicGrid(int n) : n_(n) {
  check_arity(n);
  root_.lo.assign(axis_count(n), -1.0);
  root_.hi.assign(axis_count(n), 1.0);
}

DyadicGrid::DyadicGrid(int n, Box root) : n_(n), root_(std::move(root)) {
  check_arity(n);
  if (root_.axes() != axis_count(n) || static_cast<int>(root_.hi.size()) != axis_count(n))
    throw UsageError("root box has the wrong number of axes");
}

CubeIndex DyadicGrid::cube_of_point(const GPoint& g, int level) const {
  if (g.n != n_) throw UsageError("point arity does not match the grid");
  if (level < 0) throw UsageError("cube level must be non-negative");
  const auto c = axis_coords(g);
  if (!root_.contains(c)) throw UsageError("point lies outside the root region");
  CubeIndex i{level, {}};
  for (int a = 0; a < axis_count(n_); ++a)
    i.idx.push_back(static_cast<std::int64_t>(std::floor(c[a] / side_along(n_, a, level))));
  return i;
}

Cube DyadicGrid::cube(const CubeIndex& i) const {
  if (static_cast<int>(i.idx.size()) != axis_count(n_)) throw UsageError("cube index has the wrong number of axes");
  Cube q{i, {}, {}};
  for (int a = 0; a < axis_count(n_); ++a) {
    const double side = side_along(n_, a, i.level);
    q.box.lo.push_back(static_cast<double>(i.idx[a]) * side);
    q.box.hi.push_back(static_cast<double>(i.idx[a] + 1) * side);
  }
  q.center = from_axis_coords(n_, q.box.center());
  return q;
}

double twist_bound(int n, const Box& b) {
  double s = 0.0;
  for (int a = 0; a < 2 * n - 2; ++a) {
    const double m = std::max(std::abs(b.lo[a]), std::abs(b.hi[a]));
    s += m * m;
  }
  return std::sqrt(s);
}

double vertical_reach(double g, double z) {
  if (g <= 0.0) return 0.0;
  return 4.0 * g / (z + std::sqrt(z * z + 4.0 * g));
}

double vertical_margin(double d, double z) { return d * d / 4.0 + z * d / 2.0; }

double dist_lower_bound_to_complement(const GPoint& q, const Cube& Q) {
  const auto c = axis_coords(q);
  if (!Q.box.contains(c)) return 0.0;
  const int t = Q.box.axes() - 1;
  double h = kInf;
  for (int a = 0; a < t; ++a) h = std::min({h, c[a] - Q.box.lo[a], Q.box.hi[a] - c[a]});
  double zq = 0.0;
  for (int i = 0; i < q.zdim(); ++i) zq += q.z[i] * q.z[i];
  const double gt = std::min(c[t] - Q.box.lo[t], Q.box.hi[t] - c[t]);
  return std::min(h, vertical_reach(gt, std::sqrt(zq)));
}

double diameter_bound(int n, const Box& b, double z) {
  const int t = b.axes() - 1;
  double hsq = 0.0, zsq = 0.0;
  for (int a = 0; a < t; ++a) {
    const double w = b.hi[a] - b.lo[a];
    hsq += w * w;
    if (a < 2 * n - 2) zsq += w * w;
  }
  const double dt = (b.hi[t] - b.lo[t]) + 0.5 * z * std::sqrt(zsq);
  return std::sqrt(std::hypot(hsq, 4.0 * dt));
}

CoreBox prune_boundary(const Cube& Q, double rho, const Box* parent_core, double z) {
  if (rho < 0.0) throw UsageError("pruning width must be non-negative");
  const int n = Q.center.n;
  const int t = Q.box.axes() - 1;
  const double m = std::ldexp(rho, -Q.index.level);
  const double g = vertical_margin(m, std::max(z, twist_bound(n, Q.box)));
  CoreBox out{Q.box, false};
  for (int a = 0; a <= t; ++a) {
    const double w = a == t ? g : m;
    out.box.lo[a] += w;
    out.box.hi[a] -= w;
    if (parent_core) {
      out.box.lo[a] = std::max(out.box.lo[a], parent_core->lo[a]);
      out.box.hi[a] = std::min(out.box.hi[a], parent_core->hi[a]);
    }
    if (!(out.box.lo[a] < out.box.hi[a])) out.empty = true;
  }
  return out;
}

double AxisLevel::kept_length() const {
  double s = 0.0;
  for (const auto& c : cells) s += c.core_hi - c.core_lo;
  return s;
}

double AxisLevel::min_gap() const {
  double g = kInf;
  for (std::size_t i = 1; i < cells.size(); ++i) g = std::min(g, cells[i].core_lo - cells[i - 1].core_hi);
  return g;
}

double AxisFamily::predicted_fraction(int upto) const {
  if (levels.empty()) return 1.0;
  const auto& root = levels.front().cells.front();
  const double side = root.hi - root.lo;
  double lost = 2.0 * levels.front().margin;
  double parents = 1.0;
  for (int k = 1; k <= upto && k < static_cast<int>(levels.size()); ++k) {
    lost += parents * (split - 1) * 2.0 * levels[k].margin;
    parents *= split;
  }
  return 1.0 - lost / side;
}

double boundary_constant(int n, int level, double twist) {
  const double h = 2 * n - 1;
  const double s = kCubeSigma;
  return 2.0 * h / s + 1.0 / (2.0 * s * s) + twist * std::ldexp(1.0, level) / (s * s);
}

double auto_tau(int n, int n0, int nmax, double epsilon, double twist) {
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  double sum = 0.0;
  if (twist == 0.0) {
    sum = boundary_constant(n, n0, 0.0) * std::exp2(-n0 * epsilon) / (1.0 - std::exp2(-epsilon));
  } else {
    for (int k = n0; k <= nmax; ++k) sum += boundary_constant(n, k, twist) * std::exp2(-k * epsilon);
  }
  return 0.5 / sum;
}

double unit_ball_measure(int n) {
  const double h = 2 * n - 1;
  const double sphere = 2.0 * std::pow(std::numbers::pi, h / 2.0) / std::tgamma(h / 2.0);
  return sphere * std::beta(h / 4.0, 1.5) / 8.0;
}

CantorRealization build_fat_cantor(const CantorParams& p) {
  check_arity(p.n);
  if (p.x0.n != p.n) throw UsageError("center arity does not match n");
  if (p.n0 < 0 || p.nmax <= p.n0) throw UsageError("need 0 <= n0 < nmax");
  if (!(p.alpha > 0.0 && p.alpha <= 1.0)) throw UsageError("alpha must lie in (0, 1]");
  if (p.tau && !(*p.tau >= 0.0)) throw UsageError("tau must be non-negative");

  CantorRealization c;
  c.n = p.n;
  c.n0 = p.n0;
  c.nmax = p.nmax;
  c.epsilon = p.alpha / 2.0;
  const DyadicGrid grid(p.n);
  c.root = grid.cube(grid.cube_of_point(p.x0, p.n0));
  c.twist = twist_bound(p.n, c.root.box);
  c.tau = p.tau ? *p.tau : auto_tau(p.n, p.n0, p.nmax, c.epsilon, c.twist);
  c.measure_root = c.root.box.volume();
  c.measure_ball = unit_ball_measure(p.n);

  const int axes = axis_count(p.n);
  const int t = axes - 1;
  const int depth = p.nmax - p.n0;
  c.axes.resize(axes);
  for (int a = 0; a < axes; ++a) {
    auto& fam = c.axes[a];
    fam.split = a == t ? 4 : 2;
    fam.levels.resize(depth + 1);
    for (int k = 0; k <= depth; ++k) {
      const int level = p.n0 + k;
      const double m = c.tau * std::exp2(-level * c.epsilon) * std::ldexp(1.0, -level);
      auto& L = fam.levels[k];
      L.margin = a == t ? vertical_margin(m, c.twist) : m;
      const double side = side_along(p.n, a, level);
      auto add = [&](std::int64_t index, double plo, double phi) {
        AxisCell cell;
        cell.index = index;
        cell.lo = static_cast<double>(index) * side;
        cell.hi = static_cast<double>(index + 1) * side;
        cell.core_lo = std::max(cell.lo + L.margin, plo);
        cell.core_hi = std::min(cell.hi - L.margin, phi);
        if (cell.core_lo < cell.core_hi) L.cells.push_back(cell);
      };
      if (k == 0) {
        add(c.root.index.idx[a], -kInf, kInf);
      } else {
        auto& parents = fam.levels[k - 1].cells;
        for (auto& par : parents) {
          par.first_child = static_cast<std::int32_t>(L.cells.size());
          for (int j = 0; j < fam.split; ++j) add(par.index * fam.split + j, par.core_lo, par.core_hi);
          par.children = static_cast<std::int32_t>(L.cells.size()) - par.first_child;
        }
      }
      if (L.cells.empty())
        throw InvariantViolation("fat Cantor set became empty at level " + std::to_string(level));
    }
  }

  double prev = 1.0;
  double predicted = 1.0;
  for (int a = 0; a < axes; ++a) predicted *= c.axes[a].predicted_fraction(depth);
  c.predicted_kept = predicted;
  for (int k = 0; k <= depth; ++k) {
    const int level = p.n0 + k;
    CantorLevel s;
    s.level = level;
    s.cubes_alive = 1.0;
    s.measure_kept = 1.0;
    double hgap = kInf;
    for (int a = 0; a < axes; ++a) {
      const auto& L = c.axes[a].levels[k];
      const auto& r = c.axes[a].levels[0].cells.front();
      s.cubes_alive *= static_cast<double>(L.cells.size());
      s.measure_kept *= L.kept_length() / (r.hi - r.lo);
      if (a < t) hgap = std::min(hgap, L.min_gap());
    }
    s.min_separation = std::min(hgap, vertical_reach(c.axes[t].levels[k].min_gap(), c.twist));
    s.required_separation = c.tau * std::exp2(-(1.0 + c.epsilon) * level);
    s.separated = s.min_separation >= s.required_separation * (1.0 - 1e-12);
    s.loss = prev - s.measure_kept;
    s.loss_bound = boundary_constant(p.n, level, c.twist) * c.tau * std::exp2(-level * c.epsilon);
    s.diameter = diameter_bound(p.n, sized_box(p.n, level), c.twist);
    s.diameter_ok = s.diameter < std::ldexp(1.0, -level);
    prev = s.measure_kept;
    c.levels.push_back(s);
  }
  c.measure_kept = prev * c.measure_root;
  return c;
}

Box core_box(const CantorRealization& c, const KeptPoint& k, int level) {
  const int i = level - c.n0;
  if (i < 0 || i > c.nmax - c.n0) throw UsageError("level outside the realization");
  Box b;
  for (std::size_t a = 0; a < c.axes.size(); ++a) {
    const auto& cell = c.axes[a].levels[i].cells[k.cell[a][i]];
    b.lo.push_back(cell.core_lo);
    b.hi.push_back(cell.core_hi);
  }
  return b;
}

GPoint core_center(const CantorRealization& c, const KeptPoint& k, int level) {
  return from_axis_coords(c.n, core_box(c, k, level).center());
}

std::vector<KeptPoint> sample_kept_points(const CantorRealization& c, int count, std::uint64_t seed) {
  if (count < 0) throw UsageError("sample count must be non-negative");
  Sampler rng(seed);
  const int depth = c.nmax - c.n0;
  std::vector<KeptPoint> out;
  std::vector<std::vector<std::vector<std::int32_t>>> seen;
  const long attempts = 20L * count + 100;
  for (long trial = 0; trial < attempts && static_cast<int>(out.size()) < count; ++trial) {
    KeptPoint kp;
    kp.cell.resize(c.axes.size());
    bool ok = true;
    for (std::size_t a = 0; a < c.axes.size() && ok; ++a) {
      std::int32_t cur = 0;
      kp.cell[a].push_back(cur);
      for (int k = 1; k <= depth; ++k) {
        const auto& par = c.axes[a].levels[k - 1].cells[cur];
        if (par.children == 0) {
          ok = false;
          break;
        }
        cur = par.first_child + static_cast<std::int32_t>(rng.index(static_cast<std::size_t>(par.children)));
        kp.cell[a].push_back(cur);
      }
    }
    if (!ok || std::find(seen.begin(), seen.end(), kp.cell) != seen.end()) continue;
    seen.push_back(kp.cell);
    kp.g = core_center(c, kp, c.nmax);
    out.push_back(std::move(kp));
  }
  return out;
}

}  // namespace heisrect

#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <string>

namespace heisrect {

inline constexpr int kMaxN = 6;
using Coords = std::array<double, 2 * kMaxN>;

void check_arity(int n);

// A point (x_1, ..., x_{2n}, t) of the Heisenberg group H^n.
struct HPoint {
  int n = 1;
  Coords x{};
  double t = 0.0;

  HPoint() = default;
  explicit HPoint(int n_);
  HPoint(int n_, std::initializer_list<double> horizontal, double t_);

  int dim() const { return 2 * n; }
  // 1-based access, matching x_1 ... x_{2n}
  double& operator[](int i) { return x[static_cast<std::size_t>(i - 1)]; }
  double operator[](int i) const { return x[static_cast<std::size_t>(i - 1)]; }
  bool finite() const;
  bool operator==(const HPoint& o) const;
};

// A point (0, x_2, ..., x_{2n}, t) of the vertical subgroup W; y holds x_2..x_{2n}.
struct WPoint {
  int n = 1;
  Coords y{};
  double t = 0.0;

  WPoint() = default;
  explicit WPoint(int n_);
  WPoint(int n_, std::initializer_list<double> y_, double t_);

  int dim() const { return 2 * n - 1; }
  // x_j for j = 2..2n
  double& x(int j) { return y[static_cast<std::size_t>(j - 2)]; }
  double x(int j) const { return y[static_cast<std::size_t>(j - 2)]; }
  bool operator==(const WPoint& o) const;
};

// A point of the model group: the parabolic plane (y, t) when n = 1,
// ((z_1..z_{2n-2}, t), s) in H^{n-1} x R when n >= 2.  For n = 1, z is empty
// and s plays the role of y, so a single product formula covers both.
struct GPoint {
  int n = 1;
  Coords z{};
  double t = 0.0;
  double s = 0.0;

  GPoint() = default;
  explicit GPoint(int n_);
  static GPoint plane(double y, double t);
  static GPoint product(int n, std::initializer_list<double> z, double t, double s);

  int zdim() const { return 2 * n - 2; }
  // number of horizontal coordinates: z plus s
  int hdim() const { return 2 * n - 1; }
  double y() const { return s; }
  bool operator==(const GPoint& o) const;
};

// Symplectic form omega(x, x') = sum_i (x_i x'_{n+i} - x'_i x_{n+i}).
double symplectic(int n, const Coords& a, const Coords& b);

HPoint mul(const HPoint& p, const HPoint& q);
HPoint inv(const HPoint& p);
double norm(const HPoint& p);
double dist(const HPoint& p, const HPoint& q);
HPoint dilate(const HPoint& p, double r);
double sup_diff(const HPoint& p, const HPoint& q);

HPoint embed(const WPoint& w);
HPoint vertical(int n, double v);
WPoint wmul(const WPoint& a, const WPoint& b);
WPoint winv(const WPoint& w);
double wnorm(const WPoint& w);
WPoint wdilate(const WPoint& w, double r);

struct Split {
  WPoint w;
  double v = 0.0;
};
Split split(const HPoint& p);
WPoint project_w(const HPoint& p);

GPoint model_mul(const GPoint& g, const GPoint& h);
GPoint model_inv(const GPoint& g);
double model_norm(const GPoint& g);
double model_dist(const GPoint& g, const GPoint& h);
GPoint model_dilate(const GPoint& g, double r);
WPoint model_embed(const GPoint& g);
GPoint model_from_w(const WPoint& w);

std::string to_string(const HPoint& p);

}  // namespace heisrect

#include "heisrect/group.hpp"

#include <cmath>
#include <sstream>

#include "heisrect/errors.hpp"

namespace heisrect {

void check_arity(int n) {
  if (n < 1 || n > kMaxN) {
    throw UsageError("group index n must lie in [1, " + std::to_string(kMaxN) + "], got " +
                     std::to_string(n));
  }
}

namespace {

void same_arity(int a, int b) {
  if (a != b) {
    throw UsageError("arity mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

template <class It>
void fill(Coords& dst, It begin, It end, std::size_t expected, const char* what) {
  if (static_cast<std::size_t>(end - begin) != expected) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(expected) + " coordinates");
  }
  std::size_t i = 0;
  for (It it = begin; it != end; ++it) dst[i++] = *it;
}

}  // namespace

HPoint::HPoint(int n_) : n(n_) { check_arity(n_); }

HPoint::HPoint(int n_, std::initializer_list<double> horizontal, double t_) : n(n_), t(t_) {
  check_arity(n_);
  fill(x, horizontal.begin(), horizontal.end(), static_cast<std::size_t>(2 * n_), "HPoint");
}

bool HPoint::finite() const {
  for (int i = 0; i < dim(); ++i)
    if (!std::isfinite(x[i])) return false;
  return std::isfinite(t);
}

bool HPoint::operator==(const HPoint& o) const {
  if (n != o.n || t != o.t) return false;
  for (int i = 0; i < dim(); ++i)
    if (x[i] != o.x[i]) return false;
  return true;
}

WPoint::WPoint(int n_) : n(n_) { check_arity(n_); }

WPoint::WPoint(int n_, std::initializer_list<double> y_, double t_) : n(n_), t(t_) {
  check_arity(n_);
  fill(y, y_.begin(), y_.end(), static_cast<std::size_t>(2 * n_ - 1), "WPoint");
}

bool WPoint::operator==(const WPoint& o) const {
  if (n != o.n || t != o.t) return false;
  for (int i = 0; i < dim(); ++i)
    if (y[i] != o.y[i]) return false;
  return true;
}

GPoint::GPoint(int n_) : n(n_) { check_arity(n_); }

GPoint GPoint::plane(double y, double t) {
  GPoint g(1);
  g.s = y;
  g.t = t;
  return g;
}

GPoint GPoint::product(int n, std::initializer_list<double> z, double t, double s) {
  GPoint g(n);
  fill(g.z, z.begin(), z.end(), static_cast<std::size_t>(2 * n - 2), "GPoint");
  g.t = t;
  g.s = s;
  return g;
}

bool GPoint::operator==(const GPoint& o) const {
  if (n != o.n || t != o.t || s != o.s) return false;
  for (int i = 0; i < zdim(); ++i)
    if (z[i] != o.z[i]) return false;
  return true;
}

double symplectic(int n, const Coords& a, const Coords& b) {
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += a[i] * b[n + i] - b[i] * a[n + i];
  return acc;
}

HPoint mul(const HPoint& p, const HPoint& q) {
  same_arity(p.n, q.n);
  HPoint r(p.n);
  for (int i = 0; i < p.dim(); ++i) r.x[i] = p.x[i] + q.x[i];
  r.t = p.t + q.t + 0.5 * symplectic(p.n, p.x, q.x);
  return r;
}

HPoint inv(const HPoint& p) {
  HPoint r(p.n);
  for (int i = 0; i < p.dim(); ++i) r.x[i] = -p.x[i];
  r.t = -p.t;
  return r;
}

double norm(const HPoint& p) {
  double a = 0.0;
  for (int i = 0; i < p.dim(); ++i) a += p.x[i] * p.x[i];
  return std::sqrt(std::hypot(a, 4.0 * p.t));
}

double dist(const HPoint& p, const HPoint& q) { return norm(mul(inv(q), p)); }

HPoint dilate(const HPoint& p, double r) {
  if (!(r > 0.0)) throw UsageError("dilation factor must be positive");
  HPoint out(p.n);
  for (int i = 0; i < p.dim(); ++i) out.x[i] = r * p.x[i];
  out.t = r * r * p.t;
  return out;
}

double sup_diff(const HPoint& p, const HPoint& q) {
  same_arity(p.n, q.n);
  double m = std::abs(p.t - q.t);
  for (int i = 0; i < p.dim(); ++i) m = std::max(m, std::abs(p.x[i] - q.x[i]));
  return m;
}

HPoint embed(const WPoint& w) {
  HPoint p(w.n);
  for (int i = 0; i < w.dim(); ++i) p.x[i + 1] = w.y[i];
  p.t = w.t;
  return p;
}

HPoint vertical(int n, double v) {
  HPoint p(n);
  p.x[0] = v;
  return p;
}

WPoint wmul(const WPoint& a, const WPoint& b) { return project_w(mul(embed(a), embed(b))); }

WPoint winv(const WPoint& w) {
  WPoint r(w.n);
  for (int i = 0; i < w.dim(); ++i) r.y[i] = -w.y[i];
  r.t = -w.t;
  return r;
}

double wnorm(const WPoint& w) { return norm(embed(w)); }

WPoint wdilate(const WPoint& w, double r) { return project_w(dilate(embed(w), r)); }

Split split(const HPoint& p) {
  Split s;
  s.w = WPoint(p.n);
  for (int i = 1; i < p.dim(); ++i) s.w.y[i - 1] = p.x[i];
  s.w.t = p.t + 0.5 * p.x[0] * p.x[p.n];
  s.v = p.x[0];
  return s;
}

WPoint project_w(const HPoint& p) { return split(p).w; }

GPoint model_mul(const GPoint& g, const GPoint& h) {
  same_arity(g.n, h.n);
  const int m = g.n - 1;
  GPoint r(g.n);
  for (int i = 0; i < g.zdim(); ++i) r.z[i] = g.z[i] + h.z[i];
  r.t = g.t + h.t + 0.5 * symplectic(m, g.z, h.z);
  r.s = g.s + h.s;
  return r;
}

GPoint model_inv(const GPoint& g) {
  GPoint r(g.n);
  for (int i = 0; i < g.zdim(); ++i) r.z[i] = -g.z[i];
  r.t = -g.t;
  r.s = -g.s;
  return r;
}

double model_norm(const GPoint& g) {
  double a = g.s * g.s;
  for (int i = 0; i < g.zdim(); ++i) a += g.z[i] * g.z[i];
  return std::sqrt(std::hypot(a, 4.0 * g.t));
}

double model_dist(const GPoint& g, const GPoint& h) { return model_norm(model_mul(model_inv(h), g)); }

GPoint model_dilate(const GPoint& g, double r) {
  if (!(r > 0.0)) throw UsageError("dilation factor must be positive");
  GPoint out(g.n);
  for (int i = 0; i < g.zdim(); ++i) out.z[i] = r * g.z[i];
  out.t = r * r * g.t;
  out.s = r * g.s;
  return out;
}

// ((z_1..z_{2n-2}, t), s) -> (0, z_1..z_{n-1}, s, z_n..z_{2n-2}, t)
WPoint model_embed(const GPoint& g) {
  const int m = g.n - 1;
  WPoint w(g.n);
  for (int i = 0; i < m; ++i) w.y[i] = g.z[i];
  w.y[m] = g.s;
  for (int i = 0; i < m; ++i) w.y[m + 1 + i] = g.z[m + i];
  w.t = g.t;
  return w;
}

GPoint model_from_w(const WPoint& w) {
  const int m = w.n - 1;
  GPoint g(w.n);
  for (int i = 0; i < m; ++i) g.z[i] = w.y[i];
  g.s = w.y[m];
  for (int i = 0; i < m; ++i) g.z[m + i] = w.y[m + 1 + i];
  g.t = w.t;
  return g;
}

std::string to_string(const HPoint& p) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < p.dim(); ++i) os << p.x[i] << ", ";
  os << p.t << ")";
  return os.str();
}

}  // namespace heisrect

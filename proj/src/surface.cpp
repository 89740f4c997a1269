#include "heisrect/surface.hpp"

#include <algorithm>
#include <cmath>

#include "heisrect/errors.hpp"

namespace heisrect {

FlagProfile::FlagProfile(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.empty() || knots_.size() != values_.size())
    throw UsageError("flag profile needs matching, non-empty knot and value lists");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1])) throw UsageError("flag profile knots must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v)) throw UsageError("flag profile values must be finite");
}

FlagProfile FlagProfile::linear(double slope, double half_width) {
  return FlagProfile({-half_width, half_width}, {-slope * half_width, slope * half_width});
}

FlagProfile FlagProfile::tent() { return FlagProfile({-2.0, -1.0, 0.0, 1.0, 2.0}, {0.0, -1.0, 0.0, -1.0, 0.0}); }

double FlagProfile::operator()(double y) const {
  if (y <= knots_.front()) return values_.front();
  if (y >= knots_.back()) return values_.back();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), y);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
  const double a = knots_[k - 1], b = knots_[k];
  const double lam = (y - a) / (b - a);
  return values_[k - 1] + lam * (values_[k] - values_[k - 1]);
}

double FlagProfile::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  if (a == b) return 0.0;
  double acc = 0.0, prev = a, fprev = (*this)(a);
  for (auto it = std::upper_bound(knots_.begin(), knots_.end(), a); it != knots_.end() && *it < b; ++it) {
    const double fk = values_[static_cast<std::size_t>(it - knots_.begin())];
    acc += 0.5 * (fprev + fk) * (*it - prev);
    prev = *it;
    fprev = fk;
  }
  return acc + 0.5 * (fprev + (*this)(b)) * (b - prev);
}

double FlagProfile::lipschitz() const {
  double m = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i)
    m = std::max(m, std::abs(values_[i] - values_[i - 1]) / (knots_[i] - knots_[i - 1]));
  return m;
}

double cutoff_step(double u) {
  if (u <= 1.0) return 1.0;
  if (u >= 2.0) return 0.0;
  const double v = u - 1.0;
  return 1.0 - v * v * v * (10.0 + v * (-15.0 + 6.0 * v));
}

struct SurfaceFn::Impl {
  int n = 1;
  SurfaceKind kind = SurfaceKind::Constant;
  Regularity reg;
  double c = 0.0;
  double a = 0.0, window = 0.0;
  FlagProfile psi;
  double amp = 0.0, rad = 1.0;
  TabulatedGrid grid;
  std::shared_ptr<const Impl> base;
  double r = 1.0;
};

namespace {

double eval(const SurfaceFn::Impl& s, const WPoint& w) {
  switch (s.kind) {
    case SurfaceKind::Constant:
      return s.c;
    case SurfaceKind::BigolinVittone: {
      if (w.t <= 0.0) return 0.0;
      double cut = cutoff_step(w.t / s.window);
      for (int i = 0; i < w.dim() && cut > 0.0; ++i) cut *= cutoff_step(std::abs(w.y[i]) / s.window);
      if (cut == 0.0) return 0.0;
      return -std::pow(w.t, s.a) / (1.0 - s.a) * cut;
    }
    case SurfaceKind::Flag:
      return s.psi(w.y[s.n - 1]);
    case SurfaceKind::Bump: {
      double r2 = w.t * w.t / (s.rad * s.rad * s.rad * s.rad);
      for (int i = 0; i < w.dim(); ++i) r2 += w.y[i] * w.y[i] / (s.rad * s.rad);
      if (r2 >= 1.0) return 0.0;
      const double u = 1.0 - r2;
      return s.amp * u * u * u;
    }
    case SurfaceKind::Tabulated: {
      const TabulatedGrid& g = s.grid;
      const double y = w.y[0], t = w.t;
      if (y < g.y0 || y > g.y1 || t < g.t0 || t > g.t1) return 0.0;
      const double fy = (y - g.y0) / (g.y1 - g.y0) * (g.ny - 1);
      const double ft = (t - g.t0) / (g.t1 - g.t0) * (g.nt - 1);
      const int iy = std::min(static_cast<int>(fy), g.ny - 2);
      const int it = std::min(static_cast<int>(ft), g.nt - 2);
      const double ly = fy - iy, lt = ft - it;
      auto at = [&](int i, int j) { return g.values[static_cast<std::size_t>(i * g.nt + j)]; };
      return (1 - ly) * ((1 - lt) * at(iy, it) + lt * at(iy, it + 1)) +
             ly * ((1 - lt) * at(iy + 1, it) + lt * at(iy + 1, it + 1));
    }
    case SurfaceKind::Rescaled:
      return eval(*s.base, wdilate(w, s.r)) / s.r;
  }
  return 0.0;
}

}  // namespace

SurfaceFn SurfaceFn::constant(int n, double c) {
  check_arity(n);
  auto s = std::make_shared<Impl>();
  s->n = n;
  s->kind = SurfaceKind::Constant;
  s->c = c;
  s->reg = {1.0, 0.0, 0.0, 1.0};
  return SurfaceFn(s);
}

SurfaceFn SurfaceFn::bigolin_vittone(int n, double a, double window) {
  check_arity(n);
  if (!(a > 0.5 && a < 1.0)) throw UsageError("Bigolin-Vittone exponent must lie in (1/2, 1)");
  if (!(window > 0.0)) throw UsageError("Bigolin-Vittone window must be positive");
  auto s = std::make_shared<Impl>();
  s->n = n;
  s->kind = SurfaceKind::BigolinVittone;
  s->a = a;
  s->window = window;
  const double ca = a / ((1.0 - a) * (1.0 - a));
  s->reg = {2.0 * a - 1.0, 1.0 / (1.0 - a), ca * std::pow(2.0 * window, 2.0 * a - 1.0), 2.0 * window};
  return SurfaceFn(s);
}

SurfaceFn SurfaceFn::flag(int n, FlagProfile psi) {
  check_arity(n);
  auto s = std::make_shared<Impl>();
  s->n = n;
  s->kind = SurfaceKind::Flag;
  double reach = 0.0;
  for (double k : psi.knots()) reach = std::max(reach, std::abs(k));
  s->reg = {1.0, 0.0, psi.lipschitz(), std::max(reach, 1.0)};
  s->psi = std::move(psi);
  return SurfaceFn(s);
}

SurfaceFn SurfaceFn::bump(int n, double amplitude, double radius) {
  check_arity(n);
  if (!(radius > 0.0)) throw UsageError("bump radius must be positive");
  auto s = std::make_shared<Impl>();
  s->n = n;
  s->kind = SurfaceKind::Bump;
  s->amp = amplitude;
  s->rad = radius;
  const double A = std::abs(amplitude);
  s->reg = {1.0, 1.72 * A / (radius * radius), 2.0 * A / radius + 2.0 * A * A / (radius * radius),
            std::max(radius, radius * radius)};
  return SurfaceFn(s);
}

SurfaceFn SurfaceFn::tabulated(TabulatedGrid grid, Regularity declared) {
  if (grid.ny < 2 || grid.nt < 2 || grid.values.size() != static_cast<std::size_t>(grid.ny * grid.nt))
    throw UsageError("tabulated surface needs an ny x nt value grid with ny, nt >= 2");
  if (!(grid.y1 > grid.y0) || !(grid.t1 > grid.t0)) throw UsageError("tabulated surface has an empty extent");
  auto s = std::make_shared<Impl>();
  s->n = 1;
  s->kind = SurfaceKind::Tabulated;
  s->grid = std::move(grid);
  s->reg = declared;
  return SurfaceFn(s);
}

SurfaceFn SurfaceFn::rescaled(double r) const {
  if (!(r > 0.0)) throw UsageError("rescaling factor must be positive");
  if (r == 1.0) return *this;
  if (impl_->kind == SurfaceKind::Constant) {
    SurfaceFn out = constant(impl_->n, impl_->c / r);
    return out;
  }
  auto s = std::make_shared<Impl>();
  s->n = impl_->n;
  s->kind = SurfaceKind::Rescaled;
  s->base = impl_;
  s->r = r;
  s->reg = impl_->reg;
  s->reg.H = std::pow(r, s->reg.alpha) * impl_->reg.H;
  s->reg.support_radius = impl_->reg.support_radius / r;
  return SurfaceFn(s);
}

SurfaceFn SurfaceFn::with_declared(Regularity r) const {
  auto s = std::make_shared<Impl>(*impl_);
  s->reg = r;
  return SurfaceFn(s);
}

double SurfaceFn::operator()(const WPoint& w) const {
  if (w.n != impl_->n) throw UsageError("surface arity does not match the parameter point");
  return eval(*impl_, w);
}

int SurfaceFn::n() const { return impl_->n; }
SurfaceKind SurfaceFn::kind() const { return impl_->kind; }
const Regularity& SurfaceFn::declared() const { return impl_->reg; }

std::string SurfaceFn::kind_name() const {
  switch (impl_->kind) {
    case SurfaceKind::Constant: return "constant";
    case SurfaceKind::BigolinVittone: return "bigolin-vittone";
    case SurfaceKind::Flag: return "flag";
    case SurfaceKind::Bump: return "bump";
    case SurfaceKind::Tabulated: return "tabulated";
    case SurfaceKind::Rescaled: return "rescaled";
  }
  return "unknown";
}

bool SurfaceFn::t_independent() const {
  const Impl* s = impl_.get();
  while (s->kind == SurfaceKind::Rescaled) s = s->base.get();
  return s->kind == SurfaceKind::Constant || s->kind == SurfaceKind::Flag;
}

const FlagProfile* SurfaceFn::profile() const {
  return impl_->kind == SurfaceKind::Flag ? &impl_->psi : nullptr;
}

double SurfaceFn::bv_exponent() const { return impl_->kind == SurfaceKind::BigolinVittone ? impl_->a : 0.0; }
double SurfaceFn::constant_value() const { return impl_->c; }

}  // namespace heisrect

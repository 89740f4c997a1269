#include "heisrect/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heisrect/errors.hpp"

namespace heisrect {

HPoint graph_point(const WFunction& f, const WPoint& w) {
  const double v = f(w);
  if (!std::isfinite(v)) throw NumericalFailure("graph function returned a non-finite value");
  HPoint p = embed(w);
  // w . (v, 0, ..., 0): only x_1 and t change
  p.x[0] = v;
  p.t -= 0.5 * v * p.x[w.n];
  return p;
}

HPoint graph_point(const SurfaceFn& phi, const WPoint& w) {
  return graph_point([&phi](const WPoint& u) { return phi(u); }, w);
}

GraphPoint graph_map(const SurfaceFn& phi, const WPoint& w) { return {w, graph_point(phi, w)}; }

double translate_fn(const SurfaceFn& phi, const HPoint& p, const WPoint& w) {
  return -p.x[0] + phi(project_w(mul(p, embed(w))));
}

WFunction translated(const SurfaceFn& phi, const HPoint& p) {
  return [phi, p](const WPoint& w) { return translate_fn(phi, p, w); };
}

namespace {

// one RK4 step of x_{n+1}' = 1, t' = f along D_{n+1}
WPoint characteristic_step(const WFunction& f, const WPoint& w, double h) {
  const int j = w.n + 1;
  auto at = [&](double ds, double t) {
    WPoint u = w;
    u.x(j) += ds;
    u.t = t;
    return f(u);
  };
  const double k1 = at(0.0, w.t);
  const double k2 = at(0.5 * h, w.t + 0.5 * h * k1);
  const double k3 = at(0.5 * h, w.t + 0.5 * h * k2);
  const double k4 = at(h, w.t + h * k3);
  WPoint out = w;
  out.x(j) += h;
  out.t = w.t + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return out;
}

}  // namespace

std::vector<double> intrinsic_gradient(const WFunction& f, int n, const WPoint& w, double h) {
  if (!(h > 0.0)) throw UsageError("gradient step must be positive");
  if (w.n != n) throw UsageError("gradient arity mismatch");
  std::vector<double> g(static_cast<std::size_t>(2 * n - 1));
  for (int j = 2; j <= 2 * n; ++j) {
    double fp, fm;
    if (j == n + 1) {
      fp = f(characteristic_step(f, w, h));
      fm = f(characteristic_step(f, w, -h));
    } else {
      WPoint e(n);
      e.x(j) = h;
      fp = f(wmul(w, e));
      fm = f(wmul(w, winv(e)));
    }
    const double d = (fp - fm) / (2.0 * h);
    if (!std::isfinite(d)) throw NumericalFailure("non-finite intrinsic derivative");
    g[static_cast<std::size_t>(j - 2)] = d;
  }
  return g;
}

std::vector<double> intrinsic_gradient(const SurfaceFn& phi, const WPoint& w, double h) {
  return intrinsic_gradient([&phi](const WPoint& u) { return phi(u); }, phi.n(), w, h);
}

std::vector<double> normal(const SurfaceFn& phi, const WPoint& w, double h) {
  const std::vector<double> g = intrinsic_gradient(phi, w, h);
  double s = 1.0;
  for (double v : g) s += v * v;
  const double r = std::sqrt(s);
  std::vector<double> nu;
  nu.reserve(g.size() + 1);
  nu.push_back(-1.0 / r);
  for (double v : g) nu.push_back(v / r);
  return nu;
}

double lip_estimate(const SurfaceFn& phi, const std::vector<WPoint>& samples) {
  if (samples.size() < 2) throw UsageError("lip_estimate needs at least two samples");
  std::vector<HPoint> pts;
  pts.reserve(samples.size());
  for (const WPoint& w : samples) pts.push_back(graph_point(phi, w));
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const HPoint pinv = inv(pts[i]);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const Split s = split(mul(pinv, pts[j]));
      const double den = wnorm(s.w);
      if (den == 0.0) {
        if (s.v != 0.0) return std::numeric_limits<double>::infinity();
        continue;
      }
      best = std::max(best, std::abs(s.v) / den);
    }
  }
  return best;
}

double check_holder_gradient(const SurfaceFn& phi, double alpha,
                             const std::vector<std::pair<WPoint, WPoint>>& samples, double h) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("Hoelder exponent must lie in (0, 1]");
  double best = 0.0;
  for (const auto& [w0, w] : samples) {
    const double r = wnorm(w);
    if (r == 0.0) continue;
    const HPoint p = graph_point(phi, w0);
    const std::vector<double> g0 = intrinsic_gradient(phi, w0, h);
    const std::vector<double> g1 = intrinsic_gradient(phi, project_w(mul(p, embed(w))), h);
    double d = 0.0;
    for (std::size_t k = 0; k < g0.size(); ++k) d += (g1[k] - g0[k]) * (g1[k] - g0[k]);
    best = std::max(best, std::sqrt(d) / std::pow(r, alpha));
  }
  return best;
}

VerticalHolder check_vertical_holder(const SurfaceFn& phi, double alpha,
                                     const std::vector<std::pair<WPoint, double>>& samples) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("Hoelder exponent must lie in (0, 1]");
  VerticalHolder out;
  for (const auto& [w, t2] : samples) {
    const double gap = std::abs(w.t - t2);
    if (gap == 0.0) continue;
    WPoint w2 = w;
    w2.t = t2;
    const double diff = std::abs(phi(w) - phi(w2));
    if (gap <= 1.0)
      out.small = std::max(out.small, diff / std::pow(gap, 0.5 * (1.0 + alpha)));
    else
      out.large = std::max(out.large, diff / std::pow(gap, 0.5 * (1.0 - alpha)));
  }
  return out;
}

double linear_approx_error(const SurfaceFn& phi, const WPoint& w0, const WPoint& yt, double h) {
  const HPoint p = graph_point(phi, w0);
  const std::vector<double> g = intrinsic_gradient(phi, w0, h);
  double lin = 0.0;
  for (int i = 0; i < yt.dim(); ++i) lin += g[static_cast<std::size_t>(i)] * yt.y[i];
  return std::abs(translate_fn(phi, p, yt) - lin);
}

namespace {

bool lex_less(const WPoint& a, const WPoint& b) {
  for (int i = 0; i < a.dim(); ++i)
    if (a.y[i] != b.y[i]) return a.y[i] < b.y[i];
  return a.t < b.t;
}

struct Best {
  WPoint w;
  double d = std::numeric_limits<double>::infinity();

  void offer(const WPoint& u, double du) {
    if (du < d || (du == d && lex_less(u, w))) {
      w = u;
      d = du;
    }
  }
};

// Visits center.y + k*hh for k in [-K, K]^dim in lexicographic order; t is left alone.
template <class Visit>
void scan_y(const WPoint& center, int K, double hh, Visit&& visit) {
  const int d = center.dim();
  std::vector<int> k(static_cast<std::size_t>(d), -K);
  for (;;) {
    WPoint u = center;
    for (int i = 0; i < d; ++i) u.y[i] += k[static_cast<std::size_t>(i)] * hh;
    visit(u);
    int i = d - 1;
    while (i >= 0 && k[static_cast<std::size_t>(i)] == K) {
      k[static_cast<std::size_t>(i)] = -K;
      --i;
    }
    if (i < 0) break;
    ++k[static_cast<std::size_t>(i)];
  }
}

// A quiet streak only counts once the step is fine enough to have seen a V-shaped minimum.
template <class Step>
int refine(const NearestOptions& opt, double& best, double& step_size, double fine, Step&& step) {
  int quiet = 0;
  for (int level = 1; level <= opt.max_levels; ++level) {
    const double before = best;
    step_size *= 0.5;
    step();
    quiet = (before - best <= opt.tol) ? quiet + 1 : 0;
    if (quiet >= 2 && step_size <= fine) return level;
  }
  throw NumericalFailure("nearest-point refinement did not settle within " + std::to_string(opt.max_levels) +
                         " levels");
}

}  // namespace

NearestResult nearest_point(const WFunction& f, const HPoint& z, const WPoint& seed, SearchWindow window,
                            const NearestOptions& opt) {
  if (!(window.horizontal > 0.0 && window.vertical > 0.0)) throw UsageError("search window must be positive");
  if (!(opt.tol > 0.0)) throw UsageError("nearest-point tolerance must be positive");
  if (opt.coarse < 3 || opt.max_levels < 1) throw UsageError("nearest-point grid settings out of range");
  if (seed.n != z.n) throw UsageError("nearest-point arity mismatch");

  // Search z^-1 S, the graph of u -> -z_1 + f(pi_W(z.u)), for the point nearest the origin.
  const HPoint zz = z;
  const WFunction local = [&f, zz](const WPoint& u) { return -zz.x[0] + f(project_w(mul(zz, embed(u)))); };
  auto objective = [&](const WPoint& u) { return norm(graph_point(local, u)); };
  const int K = (opt.coarse - 1) / 2;

  // For fixed y, minimize over t in seed.t +- window.vertical.
  auto profile = [&](const WPoint& at) {
    Best b;
    WPoint u = at;
    u.t = seed.t;
    b.offer(u, objective(u));
    double hv = window.vertical / K;
    for (int k = -K; k <= K; ++k) {
      u.t = seed.t + k * hv;
      b.offer(u, objective(u));
    }
    // The t-valley has width about d^2/4, so the grid must get below sqrt(tol d^3)
    // before a quiet streak means anything.  Runs to machine resolution if it has to.
    const double floor_step = 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(seed.t) + window.vertical);
    int quiet = 0;
    while ((quiet < 2 || hv > 0.5 * std::sqrt(opt.tol * b.d * b.d * b.d)) && hv > floor_step) {
      const double before = b.d;
      hv *= 0.5;
      const WPoint c = b.w;
      for (int k = -2; k <= 2; ++k) {
        u.t = c.t + k * hv;
        b.offer(u, objective(u));
      }
      quiet = (before - b.d <= opt.tol) ? quiet + 1 : 0;
    }
    return b;
  };

  Best best;
  auto offer = [&](const WPoint& u) {
    const Best b = profile(u);
    best.offer(b.w, b.d);
  };
  offer(seed);
  // In three or more horizontal dimensions the grids are capped at the planar budget.
  const int dims = seed.dim();
  int Ky = K;
  while (dims > 2 && Ky > 2 && std::pow(2.0 * Ky + 1, dims) > (2.0 * K + 1) * (2.0 * K + 1)) --Ky;
  const int stencil = dims > 2 ? 1 : 2;
  double hh = window.horizontal / Ky;
  scan_y(seed, Ky, hh, offer);
  const double fine = std::max(opt.tol, 1e-6 * window.horizontal);
  const int levels = refine(opt, best.d, hh, fine, [&] { scan_y(best.w, stencil, hh, offer); });
  const WPoint w = project_w(mul(z, embed(best.w)));
  return {w, graph_point(f, w), best.d, levels};
}

NearestResult nearest_point(const SurfaceFn& phi, const HPoint& z, const WPoint& seed, SearchWindow window,
                            const NearestOptions& opt) {
  return nearest_point([&phi](const WPoint& u) { return phi(u); }, z, seed, window, opt);
}

SearchWindow certified_window(double e) {
  // In the chart at z a candidate u with ||u . psi(u)|| <= e has |y| <= e, |psi| <= e
  // and |t - y_{n+1} psi / 2| <= e^2/4, hence |t| <= 3e^2/4.
  return {1.01 * e, 1.01 * 0.75 * e * e};
}

NearestResult project_to_graph(const WFunction& f, const HPoint& z, const NearestOptions& opt) {
  const WPoint seed = project_w(z);
  const HPoint ps = graph_point(f, seed);
  const double e = norm(mul(inv(z), ps));
  if (e <= 1e-3 * opt.tol) return {seed, ps, e, 0};
  return nearest_point(f, z, WPoint(z.n), certified_window(e), opt);
}

NearestResult project_to_graph(const SurfaceFn& phi, const HPoint& z, const NearestOptions& opt) {
  return project_to_graph([&phi](const WPoint& u) { return phi(u); }, z, opt);
}

double rounding_floor(const HPoint& q) { return 4.0 * std::sqrt(std::numeric_limits<double>::epsilon()) * norm(q); }

HPoint snap_to_graph(const SurfaceFn& phi, const HPoint& q, const NearestOptions& opt) {
  const NearestResult r = project_to_graph(phi, q, opt);
  return r.distance <= rounding_floor(q) ? q : r.point;
}

}  // namespace heisrect

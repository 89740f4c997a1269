#include "heisrect/planecorr.hpp"

#include <cmath>

#include "heisrect/errors.hpp"

namespace heisrect {

PlaneParams plane_params(int n, std::vector<double> D) {
  check_arity(n);
  if (n < 2) throw UsageError("plane correspondences need n >= 2; use the flag correspondence in H^1");
  if (static_cast<int>(D.size()) != 2 * n - 1) throw UsageError("plane parameters need 2n-1 entries");
  return {n, std::move(D)};
}

double psi_D_value(const PlaneParams& D, const WPoint& w) {
  const int n = D.n;
  double v = D.c() * w.x(n + 1);
  for (int i = 2; i <= n; ++i) v += D.a(i) * w.x(i) + D.b(i) * w.x(n + i);
  return v;
}

HPoint psi_D(const PlaneParams& D, const WPoint& w) {
  const int n = D.n;
  if (w.n != n) throw UsageError("plane map arity mismatch");
  HPoint p(n);
  const double s = w.x(n + 1);
  p[1] = psi_D_value(D, w);
  for (int i = 2; i <= n; ++i) {
    p[i] = w.x(i) + D.b(i) * s;
    p[n + i] = w.x(n + i) - D.a(i) * s;
  }
  p[n + 1] = s;
  p.t = w.t;
  return p;
}

double psi_D_drift(const PlaneParams& D, const PlaneParams& E, const WPoint& w) {
  return dist(psi_D(D, w), psi_D(E, w));
}

HPoint tan_map(const PlaneParams& Dp, const GPoint& w, const GPoint& v) {
  return psi_D(Dp, model_embed(model_mul(model_inv(w), v)));
}

PlaneOracle::PlaneOracle(SurfaceFn phi, PlaneOracleOptions opt)
    : CorrespondenceOracle(phi.n(), opt.L > 0.0 ? opt.L : 1.0 + phi.declared().L,
                           opt.A > 0.0 ? opt.A : 4.0 * phi.declared().H,
                           opt.alpha > 0.0 ? opt.alpha : phi.declared().alpha / 2.0),
      phi_(std::move(phi)),
      opt_(opt) {
  if (phi_.n() < 2) throw UsageError("the plane oracle needs n >= 2");
  if (!(opt.tol > 0.0) || !(opt.quantum > 0.0)) throw UsageError("plane oracle options must be positive");
}

PlaneParams PlaneOracle::gradient_at(const HPoint& p) const {
  std::vector<double> key(p.x.begin(), p.x.begin() + p.dim());
  key.push_back(p.t);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto g = intrinsic_gradient(phi_, project_w(p));
  for (double& x : g) x = std::round(x / opt_.quantum) * opt_.quantum;
  PlaneParams D = plane_params(n(), std::move(g));
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(std::move(key), std::move(D)).first->second;
}

HPoint PlaneOracle::model_rel(int, const HPoint& p, const GPoint& u) const {
  return mul(p, psi_D(gradient_at(p), model_embed(u)));
}

HPoint PlaneOracle::eval_rel(int level, const HPoint& p, const GPoint& u) const {
  NearestOptions o;
  o.tol = opt_.tol * std::ldexp(1.0, -2 * level);
  return snap_to_graph(phi_, model_rel(level, p, u), o);
}

HPoint tangent_lift(const std::vector<double>& grad, const WPoint& yt) {
  const int n = yt.n;
  if (static_cast<int>(grad.size()) != 2 * n - 1) throw UsageError("gradient size does not match n");
  double v = 0.0;
  for (int j = 0; j < 2 * n - 1; ++j) v += grad[j] * yt.y[j];
  return mul(embed(yt), vertical(n, v));
}

PlaneApprox plane_approx_error(const SurfaceFn& phi, const WPoint& w0, const WPoint& yt, double tol) {
  const HPoint p = graph_point(phi, w0);
  const HPoint l = tangent_lift(intrinsic_gradient(phi, w0), yt);
  const HPoint q = mul(p, l);
  PlaneApprox out;
  out.d = norm(l);
  NearestOptions o;
  o.tol = tol * out.d * out.d;
  out.error = out.d > 0.0 ? project_to_graph(phi, q, o).distance : 0.0;
  const double base = wnorm(yt);
  out.comparability = base > 0.0 ? out.d / base : 1.0;
  return out;
}

}  // namespace heisrect

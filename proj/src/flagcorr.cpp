#include "heisrect/flagcorr.hpp"

#include <algorithm>
#include <cmath>

#include "heisrect/errors.hpp"
#include "heisrect/sampling.hpp"

namespace heisrect {

namespace {

WPoint yt(double y, double t) { return WPoint(1, {y}, t); }

// Phi^(p^-1)(y, t)
HPoint translated_graph(const SurfaceFn& phi, const HPoint& p, double y, double t) {
  const double v = translate_fn(phi, p, yt(y, t));
  HPoint q(1);
  q[1] = v;
  q[2] = y;
  q.t = t - 0.5 * v * y;
  return q;
}

}  // namespace

TauSolution solve_tau(const SurfaceFn& phi, const HPoint& p, double range, double step) {
  if (phi.n() != 1 || p.n != 1) throw UsageError("flag correspondences live in H^1");
  if (!(step > 0.0) || !(range > 0.0)) throw UsageError("tau range and step must be positive");
  TauSolution sol;
  sol.p = p;
  sol.step = step;
  sol.half = static_cast<int>(std::ceil(range / step));
  sol.range = sol.half * step;
  sol.phi_ = phi;
  sol.profile_ = phi.profile();
  sol.exact = sol.profile_ != nullptr;
  const int m = 2 * sol.half + 1;
  sol.tau_.assign(m, 0.0);
  sol.slope_.assign(m, 0.0);
  auto f = [&](double s, double tau) { return translate_fn(phi, p, yt(s, tau)); };
  if (sol.exact) {
    for (int k = -sol.half; k <= sol.half; ++k) sol.tau_[k + sol.half] = sol(k * step);
  } else {
    const double limit = 1e3 * sol.range;
    for (int dir : {1, -1}) {
      const double h = dir * step;
      double tau = 0.0;
      for (int k = 0; k < sol.half; ++k) {
        const double s = k * h;
        const double k1 = f(s, tau);
        const double k2 = f(s + h / 2, tau + h / 2 * k1);
        const double k3 = f(s + h / 2, tau + h / 2 * k2);
        const double k4 = f(s + h, tau + h * k3);
        tau += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (!std::isfinite(tau) || std::abs(tau) > limit) throw NumericalFailure("characteristic ODE blew up");
        sol.tau_[sol.half + dir * (k + 1)] = tau;
      }
    }
  }
  for (int k = -sol.half; k <= sol.half; ++k) sol.slope_[k + sol.half] = f(k * step, sol.tau_[k + sol.half]);
  return sol;
}

double TauSolution::operator()(double s) const {
  if (!(std::abs(s) <= range * (1 + 1e-12))) throw UsageError("tau evaluated outside its solved range");
  if (exact) return -p[1] * s + profile_->integral(p[2], p[2] + s);
  const double u = s / step;
  const int k = std::clamp(static_cast<int>(std::floor(u)), -half, half - 1);
  const double x = u - k;
  const int i = k + half;
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
  const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  return h00 * tau_[i] + h10 * step * slope_[i] + h01 * tau_[i + 1] + h11 * step * slope_[i + 1];
}

double TauSolution::quadratic_constant() const {
  double c = 0.0;
  for (int k = -half; k <= half; ++k)
    if (k != 0) c = std::max(c, std::abs(tau_[k + half]) / ((k * step) * (k * step)));
  return c;
}

HPoint flag_param(const FlagProfile& psi, double y, double t) {
  const double v = psi(y);
  HPoint q(1);
  q[1] = v;
  q[2] = y;
  q.t = t - 0.5 * y * v + psi.integral(0.0, y);
  return q;
}

double psi_p(const SurfaceFn& phi, const TauSolution& tau, double y) { return translate_fn(phi, tau.p, yt(y, tau(y))); }

HPoint Psi_p(const SurfaceFn& phi, const TauSolution& tau, double y, double t) {
  HPoint q = translated_graph(phi, tau.p, y, tau(y));
  q.t += t;
  return q;
}

// The two points differ only in x_1; the t components cancel exactly.
double flag_approx_error(const SurfaceFn& phi, const TauSolution& tau, double y, double t) {
  const double s = tau(y);
  return std::abs(translate_fn(phi, tau.p, yt(y, s + t)) - translate_fn(phi, tau.p, yt(y, s)));
}

namespace {

double half_alpha(const SurfaceFn& phi) { return phi.declared().alpha / 2.0; }

}  // namespace

FlagOracle::FlagOracle(SurfaceFn phi, FlagOracleOptions opt)
    : CorrespondenceOracle(1, opt.L > 0.0 ? opt.L : 1.0 + phi.declared().L, opt.A > 0.0 ? opt.A : phi.declared().H,
                           opt.alpha > 0.0 ? opt.alpha : half_alpha(phi)),
      phi_(std::move(phi)),
      opt_(opt) {
  if (phi_.n() != 1) throw UsageError("the flag oracle needs n = 1");
  if (!(opt.tol > 0.0) || !(opt.ode_step > 0.0) || !(opt.range > 0.0)) throw UsageError("flag oracle options must be positive");
}

std::shared_ptr<const TauSolution> FlagOracle::tau(int level, const HPoint& p) const {
  std::pair<int, std::vector<double>> key{level, {p[1], p[2], p.t}};
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const double scale = std::ldexp(1.0, -level);
  auto sol = std::make_shared<const TauSolution>(solve_tau(phi_, p, opt_.range * scale, opt_.ode_step * scale));
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(std::move(key), std::move(sol)).first->second;
}

HPoint FlagOracle::model_rel(int level, const HPoint& p, const GPoint& u) const {
  if (u.n != 1) throw UsageError("flag oracle arity mismatch");
  return mul(p, Psi_p(phi_, *tau(level, p), u.s, u.t));
}

HPoint FlagOracle::eval_rel(int level, const HPoint& p, const GPoint& u) const {
  NearestOptions o;
  o.tol = opt_.tol * std::ldexp(1.0, -2 * level);
  return snap_to_graph(phi_, model_rel(level, p, u), o);
}

NeighborhoodCheck neighborhood_check(const SurfaceFn& phi, const HPoint& p, double r, int samples,
                                     std::uint64_t seed, double tol) {
  if (!(r > 0.0)) throw UsageError("neighborhood radius must be positive");
  const Regularity& reg = phi.declared();
  NeighborhoodCheck out;
  // flags have H = 0; their quotients are measured against r^{1+alpha}
  out.delta = (reg.H > 0.0 ? reg.H : 1.0) * std::pow(r, 1.0 + reg.alpha);

  const TauSolution tau = solve_tau(phi, p, 4.0 * r, r / 256.0);
  std::vector<double> knots, values;
  for (int k = -1024; k <= 1024; ++k) {
    knots.push_back(k * tau.step);
    values.push_back(psi_p(phi, tau, k * tau.step));
  }
  const FlagProfile prof(knots, values);
  const SurfaceFn flag = SurfaceFn::flag(1, prof);
  const WFunction local = translated(phi, p);
  NearestOptions o;
  o.tol = tol * r * r;

  Sampler rng(seed);
  const double tr = r * r * (0.25 + 0.5 * (1.0 + reg.L));
  for (int trial = 0; trial < 2000 * samples && out.samples1 < samples; ++trial) {
    const HPoint q = translated_graph(phi, p, rng.uniform(-r, r), rng.uniform(-tr, tr));
    if (norm(q) > r) continue;
    ++out.samples1;
    out.c1 = std::max(out.c1, project_to_graph(flag, q, o).distance / out.delta);
    out.c3 = std::max(out.c3, std::abs(q[1] - prof(q[2])) / out.delta);
  }
  for (int trial = 0; trial < 50 * samples && out.samples2 < samples; ++trial) {
    const double y = rng.uniform(-r, r);
    const double v = psi_p(phi, tau, y);
    const double t = rng.uniform(-r * r / 4, r * r / 4) - tau(y) + 0.5 * y * v;
    const HPoint q = Psi_p(phi, tau, y, t);
    if (norm(q) > r) continue;
    ++out.samples2;
    out.c2 = std::max(out.c2, project_to_graph(local, q, o).distance / out.delta);
  }
  return out;
}

}  // namespace heisrect

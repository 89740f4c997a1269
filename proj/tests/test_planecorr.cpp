#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heisrect/errors.hpp"
#include "heisrect/fit.hpp"
#include "heisrect/planecorr.hpp"
#include "heisrect/sampling.hpp"

using namespace heisrect;

namespace {

WPoint random_w(Sampler& rng, int n, double r) { return rng.wbox(WPoint(n), r, r * r); }

PlaneParams random_D(Sampler& rng, int n, double r) {
  std::vector<double> D;
  for (int i = 0; i < 2 * n - 1; ++i) D.push_back(rng.uniform(-r, r));
  return plane_params(n, D);
}

// max over sampled pairs of max(d(Psi w, Psi w') / d(w, w'), inverse)
double distortion(const PlaneParams& D, std::uint64_t seed) {
  Sampler rng(seed);
  double worst = 1.0;
  for (int i = 0; i < 400; ++i) {
    const WPoint a = random_w(rng, D.n, 1.0), b = random_w(rng, D.n, 1.0);
    const double d0 = wnorm(wmul(winv(a), b));
    const double d1 = dist(psi_D(D, a), psi_D(D, b));
    worst = std::max({worst, d1 / d0, d0 / d1});
  }
  return worst;
}

}  // namespace

TEST_CASE("Psi_D examples") {
  Sampler rng(1);
  for (int n : {2, 3}) {
    const auto zero = plane_params(n, std::vector<double>(2 * n - 1, 0.0));
    for (int i = 0; i < 20; ++i) {
      const WPoint w = random_w(rng, n, 1.0);
      CHECK(psi_D(zero, w) == embed(w));
    }
  }
  const auto D = plane_params(2, {1.0, 0.0, 0.0});
  const HPoint img = psi_D(D, WPoint(2, {0.3, -0.7, 1.1}, 0.4));
  CHECK(img == HPoint(2, {0.3, 0.3, -0.7, 1.1 + 0.7}, 0.4));
  CHECK_THROWS_AS(plane_params(1, {0.0}), UsageError);
  CHECK_THROWS_AS(plane_params(2, {0.0, 1.0}), UsageError);
}

TEST_CASE("Psi_D is an isomorphism onto its plane") {
  Sampler rng(2);
  for (int n : {2, 3}) {
    for (int i = 0; i < 200; ++i) {
      const auto D = random_D(rng, n, 2.0);
      const WPoint a = random_w(rng, n, 1.0), b = random_w(rng, n, 1.0);
      const HPoint lhs = psi_D(D, wmul(a, b));
      CHECK(sup_diff(lhs, mul(psi_D(D, a), psi_D(D, b))) <= 1e-10);
      CHECK(lhs[1] == doctest::Approx(psi_D_value(D, wmul(a, b))));
    }
  }
  // fitted bilipschitz constant moves continuously with D
  for (int k = 0; k < 5; ++k) {
    const auto D = random_D(rng, 2, 1.0);
    auto E = D;
    E.D[0] += 1e-3;
    const double l1 = distortion(D, 7), l2 = distortion(E, 7);
    CHECK(std::abs(l1 - l2) <= 0.05 * l1);
    double g = 0.0;
    for (double x : D.D) g += x * x;
    CHECK(l1 <= 2.0 * (1.0 + std::sqrt(g)));
  }
}

TEST_CASE("Psi_D drift") {
  Sampler rng(3);
  const auto D = random_D(rng, 2, 1.0);
  const WPoint w = random_w(rng, 2, 0.8);
  CHECK(psi_D_drift(D, D, w) == 0.0);
  CHECK(psi_D_drift(D, random_D(rng, 2, 1.0), WPoint(2)) == 0.0);
  std::vector<double> gaps, drift;
  for (int k = 1; k <= 8; ++k) {
    auto E = D;
    const double h = std::pow(10.0, -k);
    for (double& x : E.D) x += h;
    gaps.push_back(h);
    drift.push_back(psi_D_drift(D, E, w));
  }
  CHECK(fit_loglog(gaps, drift).slope >= 0.48);
}

TEST_CASE("chain rule for Tan") {
  Sampler rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto D = random_D(rng, 2, 2.0);
    const GPoint w1 = model_from_w(random_w(rng, 2, 1.0));
    const GPoint w2 = model_from_w(random_w(rng, 2, 1.0));
    const GPoint w3 = model_from_w(random_w(rng, 2, 1.0));
    CHECK(sup_diff(tan_map(D, w1, w3), mul(tan_map(D, w1, w2), tan_map(D, w2, w3))) <= 1e-10);
  }
}

TEST_CASE("plane oracle") {
  Sampler rng(5);
  const auto flat = SurfaceFn::constant(2, 0.4);
  const PlaneOracle c(flat);
  for (int i = 0; i < 20; ++i) {
    const HPoint p = graph_point(flat, random_w(rng, 2, 0.5));
    const GPoint x = model_from_w(random_w(rng, 2, 1.0));
    const GPoint v = model_mul(x, model_from_w(random_w(rng, 2, 0.2)));
    CHECK(c.eval(3, x, p, x) == p);
    // the graph is its own tangent plane
    CHECK(dist(c.eval(3, x, p, v), c.model_rel(3, p, model_mul(model_inv(x), v))) == 0.0);
  }

  const auto bump = SurfaceFn::bump(2, 0.5, 1.0);
  const PlaneOracle o(bump);
  auto dyadic = [&](double r) { return std::ldexp(std::round(rng.uniform(-r, r) * 1024.0), -10); };
  std::vector<double> scale, dev;
  for (int i = 0; i < 30; ++i) {
    const int level = 2 + static_cast<int>(rng.index(5));
    const double s = std::ldexp(1.0, -level);
    const HPoint p = graph_point(bump, random_w(rng, 2, 0.4));
    const GPoint x = GPoint::product(2, {dyadic(1), dyadic(1)}, dyadic(1), dyadic(1));
    CHECK(dist(o.eval(level, x, p, x), p) <= 1e-9);
    const GPoint u = GPoint::product(2, {dyadic(s), dyadic(s)}, 0.0, dyadic(s));
    const GPoint g = GPoint::product(2, {dyadic(1), dyadic(1)}, dyadic(1), dyadic(1));
    CHECK(o.eval(level, x, p, model_mul(x, u)) == o.eval(level, model_mul(g, x), p, model_mul(model_mul(g, x), u)));
    if (model_norm(u) > 0.0) {
      scale.push_back(model_norm(u));
      dev.push_back(dist(o.eval(level, x, p, model_mul(x, u)), o.model_rel(level, p, u)));
    }
  }
  // deviation <= C d^{1+alpha} with alpha = 1 for the bump: fit C on half, test on the rest
  double C = 0.0;
  for (std::size_t i = 0; i < scale.size() / 2; ++i) C = std::max(C, dev[i] / (scale[i] * scale[i]));
  for (std::size_t i = scale.size() / 2; i < scale.size(); ++i) CHECK(dev[i] <= 4.0 * C * scale[i] * scale[i] + 1e-12);
  CHECK_THROWS_AS(PlaneOracle(SurfaceFn::constant(1, 0.0)), UsageError);
}

TEST_CASE("plane approximation") {
  const auto flat = SurfaceFn::constant(2, -0.3);
  Sampler rng(6);
  for (int i = 0; i < 10; ++i) {
    const auto r = plane_approx_error(flat, random_w(rng, 2, 0.5), random_w(rng, 2, 0.1));
    CHECK(r.error <= 1e-12);
  }
  const auto q0 = plane_approx_error(flat, WPoint(2), WPoint(2));
  CHECK(q0.d == 0.0);
  CHECK(q0.error == 0.0);

  const auto bump = SurfaceFn::bump(2, 0.5, 1.0);
  const WPoint w0(2, {0.1, -0.2, 0.15}, 0.05);
  std::vector<WPoint> dirs;
  for (int i = 0; i < 6; ++i) dirs.push_back(random_w(rng, 2, 1.0));
  std::vector<double> ds, errs;
  double comp_fit = 0.0;
  for (double r : logspace(1e-3, 1e-1, 9)) {
    double worst = 0.0, d = 0.0;
    for (const auto& dir : dirs) {
      const auto a = plane_approx_error(bump, w0, wdilate(dir, r / wnorm(dir)));
      worst = std::max(worst, a.error);
      d = std::max(d, a.d);
      if (comp_fit == 0.0) comp_fit = a.comparability;
      CHECK(a.comparability <= 1.1 * std::max(comp_fit, 1.0 + 2.0 * bump.declared().L));
    }
    ds.push_back(d);
    errs.push_back(worst);
  }
  CHECK(fit_loglog(ds, errs).slope >= 1.9);
}

TEST_CASE("normal Holder propagation") {
  const auto bump = SurfaceFn::bump(2, 0.5, 1.0);
  Sampler rng(7);
  std::vector<double> q;
  for (int i = 0; i < 200; ++i) {
    const WPoint a = random_w(rng, 2, 0.6), b = random_w(rng, 2, 0.6);
    const auto ga = intrinsic_gradient(bump, a), gb = intrinsic_gradient(bump, b);
    double diff = 0.0;
    for (std::size_t j = 0; j < ga.size(); ++j) diff += (ga[j] - gb[j]) * (ga[j] - gb[j]);
    q.push_back(std::sqrt(diff) / dist(graph_point(bump, a), graph_point(bump, b)));
  }
  double H = 0.0;
  for (std::size_t i = 0; i < q.size() / 2; ++i) H = std::max(H, q[i]);
  for (std::size_t i = q.size() / 2; i < q.size(); ++i) CHECK(q[i] <= 2.0 * H);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heisrect/errors.hpp"
#include "heisrect/graph.hpp"
#include "heisrect/sampling.hpp"

using namespace heisrect;

namespace {

std::vector<SurfaceFn> builtins(int n) {
  std::vector<SurfaceFn> out{SurfaceFn::constant(n, 0.3), SurfaceFn::bigolin_vittone(n, 0.75),
                             SurfaceFn::flag(n, FlagProfile::tent()), SurfaceFn::bump(n, 0.5, 1.0)};
  if (n == 1) {
    TabulatedGrid g;
    g.ny = 5;
    g.nt = 4;
    for (int i = 0; i < g.ny * g.nt; ++i) g.values.push_back(0.1 * std::sin(i));
    out.push_back(SurfaceFn::tabulated(g, Regularity{}));
  }
  return out;
}

// Global (y, t) box around pi_W(z) holding every w with d(z, Phi(w)) <= e.
SearchWindow global_window(const HPoint& z, double e) {
  double xz = 0.0;
  for (int i = 0; i < z.dim(); ++i) xz += z.x[i] * z.x[i];
  xz = std::sqrt(xz);
  const double cross = std::abs(z.x[0]) + std::abs(z.x[z.n]);
  return {1.01 * e, 1.01 * (0.75 * e * e + 0.5 * xz * e + 0.5 * cross * e)};
}

// Brute force over the window: steps h (horizontal) and h^2 (vertical), then a second
// pass at step h^3 around the best vertical cell of each column.
double brute_force(const SurfaceFn& phi, const HPoint& z, const WPoint& c, SearchWindow win, double h) {
  const HPoint zi = inv(z);
  auto d = [&](const WPoint& w) { return norm(mul(zi, graph_point(phi, w))); };
  double best = 1e300;
  const int ky = static_cast<int>(std::ceil(win.horizontal / h));
  const int kt = static_cast<int>(std::ceil(win.vertical / (h * h)));
  for (int i = -ky; i <= ky; ++i) {
    WPoint w = c;
    w.y[0] += i * h;
    double col = 1e300, tc = c.t;
    for (int j = -kt; j <= kt; ++j) {
      w.t = c.t + j * h * h;
      const double v = d(w);
      if (v < col) {
        col = v;
        tc = w.t;
      }
    }
    const int kf = static_cast<int>(std::ceil(1.0 / h));
    for (int j = -kf; j <= kf; ++j) {
      w.t = tc + j * h * h * h;
      col = std::min(col, d(w));
    }
    best = std::min(best, col);
  }
  return best;
}

}  // namespace

TEST_CASE("graph map examples") {
  HPoint a = graph_point(SurfaceFn::constant(1, 1.0), WPoint(1, {3.0}, 2.0));
  CHECK(a == HPoint(1, {1.0, 3.0}, 2.0 - 1.5));
  HPoint b = graph_point(SurfaceFn::constant(2, 0.0), WPoint(2, {1, 2, 3}, 4));
  CHECK(b == embed(WPoint(2, {1, 2, 3}, 4)));
  GraphPoint g = graph_map(SurfaceFn::bigolin_vittone(1, 0.75), WPoint(1, {0.0}, 1.0));
  CHECK(g.p[1] == doctest::Approx(-4.0));
  CHECK(g.p[2] == 0.0);
  CHECK(g.p.t == 1.0);
  CHECK(SurfaceFn::bigolin_vittone(1, 0.75)(WPoint(1, {0.0}, -0.5)) == 0.0);
}

TEST_CASE("cutoff keeps the window and kills beyond twice the window") {
  SurfaceFn bv = SurfaceFn::bigolin_vittone(1, 0.75, 2.0);
  CHECK(bv(WPoint(1, {1.9}, 1.9)) == doctest::Approx(-4 * std::pow(1.9, 0.75)));
  CHECK(bv(WPoint(1, {4.1}, 1.0)) == 0.0);
  CHECK(bv(WPoint(1, {0.0}, 4.0)) == 0.0);
  CHECK(cutoff_step(1.5) == doctest::Approx(0.5));
}

TEST_CASE("translated functions") {
  Sampler s(11);
  SurfaceFn c = SurfaceFn::constant(2, 0.7);
  HPoint pc = vertical(2, 0.7);
  for (int i = 0; i < 20; ++i) CHECK(translate_fn(c, pc, s.wbox(WPoint(2), 1, 1)) == doctest::Approx(0.0));

  for (int n = 1; n <= 2; ++n) {
    for (const SurfaceFn& phi : builtins(n)) {
      for (int i = 0; i < 200; ++i) {
        const WPoint w0 = s.wbox(WPoint(n), 1.0, 1.0);
        const HPoint p = graph_point(phi, w0);
        CHECK(translate_fn(phi, p, WPoint(n)) == doctest::Approx(0.0).epsilon(1e-12));
        const WPoint w = s.wbox(WPoint(n), 1.0, 1.0);
        const HPoint lhs = graph_point(phi, project_w(mul(p, embed(w))));
        const HPoint rhs = mul(p, graph_point(translated(phi, p), w));
        REQUIRE(sup_diff(lhs, rhs) <= 1e-9);
      }
    }
  }
}

TEST_CASE("intrinsic gradient examples") {
  auto g0 = intrinsic_gradient(SurfaceFn::constant(2, 1.5), WPoint(2, {0.3, -0.2, 0.9}, 0.4));
  for (double v : g0) CHECK(v == doctest::Approx(0.0).scale(1.0));

  SurfaceFn bv = SurfaceFn::bigolin_vittone(1, 0.75);
  for (double t = 0.1; t <= 1.0 + 1e-12; t += 0.05) {
    auto g = intrinsic_gradient(bv, WPoint(1, {0.0}, t));
    const double expected = 12.0 * std::sqrt(t);
    CHECK(std::abs(g[0] - expected) / expected <= 1e-4);
  }
  auto nu = normal(bv, WPoint(1, {0.0}, 1.0));
  CHECK(nu[0] == doctest::Approx(-1.0 / std::sqrt(145.0)).epsilon(1e-6));
  CHECK(nu[1] == doctest::Approx(12.0 / std::sqrt(145.0)).epsilon(1e-6));

  SurfaceFn lin = SurfaceFn::flag(1, FlagProfile::linear(0.6, 10.0));
  CHECK(intrinsic_gradient(lin, WPoint(1, {0.4}, -2.0))[0] == doctest::Approx(0.6).epsilon(1e-9));
  SurfaceFn lin2 = SurfaceFn::flag(2, FlagProfile::linear(-0.3, 10.0));
  auto g2 = intrinsic_gradient(lin2, WPoint(2, {0.1, 0.4, 0.2}, 0.5));
  CHECK(g2[0] == doctest::Approx(0.0).scale(1.0));
  CHECK(g2[1] == doctest::Approx(-0.3).epsilon(1e-9));
  CHECK(g2[2] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("normal is the normalized (-1, grad)") {
  Sampler s(12);
  SurfaceFn b = SurfaceFn::bump(2, 0.5, 1.0);
  for (int i = 0; i < 100; ++i) {
    WPoint w = s.wbox(WPoint(2), 0.8, 0.8);
    auto nu = normal(b, w);
    auto g = intrinsic_gradient(b, w);
    double len = 0;
    for (double v : nu) len += v * v;
    CHECK(std::abs(std::sqrt(len) - 1.0) <= 1e-12);
    CHECK(nu[0] < 0);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(-nu[k + 1] / nu[0] - g[k]) <= 1e-12 * (1 + std::abs(g[k])));
  }
}

TEST_CASE("gradient of a translated function") {
  Sampler s(13);
  const double h = kGradientStep;
  for (int n = 1; n <= 2; ++n) {
    for (const SurfaceFn& phi : builtins(n)) {
      for (int i = 0; i < 100; ++i) {
        const HPoint p = graph_point(phi, s.wbox(WPoint(n), 1.0, 1.0));
        const WPoint w = s.wbox(WPoint(n), 0.5, 0.5);
        const auto a = intrinsic_gradient(translated(phi, p), n, w, h);
        const auto b = intrinsic_gradient(phi, project_w(mul(p, embed(w))), h);
        for (std::size_t k = 0; k < a.size(); ++k) REQUIRE(std::abs(a[k] - b[k]) <= 5 * h * h + 1e-6);
      }
    }
  }
}

TEST_CASE("cone-condition estimate") {
  Sampler s(14);
  std::vector<WPoint> pts;
  for (int i = 0; i < 60; ++i) pts.push_back(s.wbox(WPoint(1), 1.5, 1.5));
  CHECK(lip_estimate(SurfaceFn::constant(1, 2.0), pts) == 0.0);

  SurfaceFn f = SurfaceFn::flag(1, FlagProfile::tent());
  const double a = lip_estimate(f, pts);
  std::vector<WPoint> more = pts;
  for (int i = 0; i < 60; ++i) more.push_back(s.wbox(WPoint(1), 1.5, 1.5));
  const double b = lip_estimate(f, more);
  CHECK(b >= a);
  CHECK(std::isfinite(b));

  // dense sampling: doubling the sample does not move the estimate by more than 5%
  std::vector<WPoint> dense, denser;
  Sampler d(15);
  for (int i = 0; i < 400; ++i) dense.push_back(d.wbox(WPoint(1), 1.5, 1.5));
  denser = dense;
  for (int i = 0; i < 400; ++i) denser.push_back(d.wbox(WPoint(1), 1.5, 1.5));
  const double e1 = lip_estimate(f, dense), e2 = lip_estimate(f, denser);
  CHECK(e2 <= 1.05 * e1);
  // a 1-Lipschitz profile gives an intrinsic Lipschitz graph with constant of order 1
  CHECK(e2 < 2.0);
  CHECK_THROWS_AS(lip_estimate(f, {WPoint(1)}), UsageError);
}

TEST_CASE("Hoelder regularity of the gradient") {
  Sampler s(16);
  std::vector<std::pair<WPoint, WPoint>> samples;
  for (int i = 0; i < 300; ++i) {
    WPoint w0(1, {s.uniform(-0.5, 0.5)}, s.uniform(1e-3, 1.0));
    const double r = std::pow(10.0, s.uniform(-3, -0.5));
    WPoint w(1, {r * s.uniform(-1, 1)}, r * r * s.uniform(-0.25, 0.25));
    samples.push_back({w0, w});
  }
  CHECK(check_holder_gradient(SurfaceFn::constant(1, 1.0), 0.5, samples) == doctest::Approx(0.0).scale(1.0));
  SurfaceFn bv = SurfaceFn::bigolin_vittone(1, 0.75);
  const double H = check_holder_gradient(bv, 0.5, samples);
  CHECK(std::isfinite(H));
  CHECK(H > 0.0);

  // rescaling multiplies the constant by r^alpha on matched samples
  const double r = 0.25;
  SurfaceFn bvr = bv.rescaled(r);
  std::vector<std::pair<WPoint, WPoint>> matched;
  for (const auto& [a, b] : samples) matched.push_back({wdilate(a, 1 / r), wdilate(b, 1 / r)});
  const double Hr = check_holder_gradient(bvr, 0.5, matched);
  CHECK(std::abs(Hr - std::pow(r, 0.5) * H) <= 0.1 * std::pow(r, 0.5) * H);
  CHECK(bvr.declared().H == doctest::Approx(std::pow(r, 0.5) * bv.declared().H));
}

TEST_CASE("extra vertical Hoelder regularity") {
  Sampler s(17);
  std::vector<std::pair<WPoint, double>> samples;
  for (int i = 0; i < 2000; ++i) {
    WPoint w(1, {s.uniform(-1, 1)}, s.uniform(-0.5, 1.5));
    samples.push_back({w, w.t + std::pow(10.0, s.uniform(-6, 0)) * (s.unit() < 0.5 ? -1 : 1)});
  }
  CHECK(check_vertical_holder(SurfaceFn::constant(1, 3.0), 0.5, samples).small == 0.0);
  CHECK(check_vertical_holder(SurfaceFn::flag(1, FlagProfile::tent()), 0.5, samples).small == 0.0);
  const auto bv = check_vertical_holder(SurfaceFn::bigolin_vittone(1, 0.75), 0.5, samples);
  // |t^a - s^a| <= |t - s|^a, so the quotient is at most 1/(1-a) = 4
  CHECK(bv.small <= 4.0 + 1e-12);
  CHECK(bv.small > 2.0);
}

TEST_CASE("rescaling") {
  SurfaceFn c = SurfaceFn::constant(1, 3.0);
  CHECK(c.rescaled(2.0).constant_value() == 1.5);
  SurfaceFn bv = SurfaceFn::bigolin_vittone(1, 0.75);
  CHECK(bv.rescaled(1.0)(WPoint(1, {0.2}, 0.3)) == bv(WPoint(1, {0.2}, 0.3)));
  // graph of the rescaled function is the dilated graph
  Sampler s(18);
  SurfaceFn r = bv.rescaled(0.5);
  for (int i = 0; i < 50; ++i) {
    WPoint w = s.wbox(WPoint(1), 1, 1);
    HPoint p = graph_point(bv, w);
    HPoint q = graph_point(r, wdilate(w, 2.0));
    CHECK(sup_diff(dilate(p, 2.0), q) <= 1e-12);
  }
}

TEST_CASE("nearest point on simple graphs") {
  NearestOptions opt;
  SurfaceFn z0 = SurfaceFn::constant(1, 0.0);
  for (double d : {0.3, -0.7, 1e-4}) {
    auto r = project_to_graph(z0, vertical(1, d), opt);
    CHECK(r.distance == doctest::Approx(std::abs(d)).epsilon(1e-9));
  }
  SurfaceFn bv = SurfaceFn::bigolin_vittone(1, 0.75);
  WPoint w(1, {0.2}, 0.4);
  auto r = project_to_graph(bv, graph_point(bv, w), opt);
  CHECK(r.distance <= opt.tol);
  CHECK(sup_diff(embed(r.w), embed(w)) <= 1e-12);
  CHECK_THROWS_AS(nearest_point(bv, HPoint(1), WPoint(1), SearchWindow{0.0, 1.0}, opt), UsageError);
}

TEST_CASE("nearest point agrees with brute force") {
  Sampler s(19);
  NearestOptions opt;
  for (const SurfaceFn& phi : {SurfaceFn::bigolin_vittone(1, 0.75), SurfaceFn::flag(1, FlagProfile::tent())}) {
    for (int i = 0; i < 6; ++i) {
      const WPoint w = s.wbox(WPoint(1, {0.0}, 0.3), 0.5, 0.3);
      const HPoint z = mul(graph_point(phi, w), HPoint(1, {s.uniform(-0.01, 0.01), s.uniform(-0.01, 0.01)},
                                                        s.uniform(-1e-4, 1e-4)));
      const auto r = project_to_graph(phi, z, opt);
      const WPoint seed = project_w(z);
      const double e = dist(z, graph_point(phi, seed));
      const double bf = brute_force(phi, z, seed, global_window(z, e), 1e-3);
      CHECK(r.distance <= bf + 1e-12);
      // the brute-force grid spaces graph points about h sqrt(1 + |grad|^2) apart
      const double g = intrinsic_gradient(phi, r.w)[0];
      CHECK(bf - r.distance <= 0.5e-3 * std::sqrt(1 + 4 * g * g) + 1e-6);
    }
  }
}

TEST_CASE("nearest point is deterministic") {
  SurfaceFn bv = SurfaceFn::bigolin_vittone(1, 0.75);
  HPoint z(1, {0.05, 0.1}, 0.2);
  auto a = project_to_graph(bv, z, NearestOptions{});
  auto b = project_to_graph(bv, z, NearestOptions{});
  CHECK(a.w == b.w);
  CHECK(a.distance == b.distance);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heisrect/builder.hpp"
#include "heisrect/errors.hpp"
#include "heisrect/flagcorr.hpp"
#include "heisrect/graph.hpp"
#include "heisrect/sampling.hpp"

using namespace heisrect;

namespace {

CantorRealization cantor(int n, int n0, int nmax) {
  CantorParams p;
  p.n = n;
  p.n0 = n0;
  p.nmax = nmax;
  p.alpha = 0.5;
  p.x0 = GPoint(n);
  return build_fat_cantor(p);
}

BuildParams params_for(const CantorRealization& c) {
  BuildParams b;
  b.n0 = c.n0;
  b.nmax = c.nmax;
  b.epsilon = c.epsilon;
  b.tau = c.tau;
  b.p0 = HPoint(c.n);
  b.x0 = GPoint(c.n);
  return b;
}

std::vector<BasePoint> origin_bases(int n, Sampler& rng, int count) {
  std::vector<BasePoint> out;
  for (int i = 0; i < count; ++i) {
    const GPoint x = rng.gball(GPoint(n), 0.5);
    out.push_back({x, model_to_w(rng.gball(GPoint(n), 0.5))});
  }
  return out;
}

}  // namespace

TEST_CASE("n0 thresholds") {
  // L = 1, A = 0: only 2^{-n} <= 1/4 and 2 * 2^{-n} <= 1/2 remain
  const auto t = n0_thresholds(1.0, 0.0, 0.5, 0.1);
  CHECK(t.scale == doctest::Approx(2.0));
  CHECK(t.distortion == doctest::Approx(1.0));
  CHECK(t.n0 == 2);

  // separation: A 2^{-n(1+a)} * 4L 2^{1+a/2} <= tau 2^{-n} solved by hand for L = 1, A = 1, a = 1, tau = 1/8
  const auto s = n0_thresholds(1.0, 1.0, 1.0, 0.125);
  CHECK(s.separation == doctest::Approx(2.0 * std::log2(4.0 * std::exp2(1.5) * 8.0)));
  CHECK(s.tail > s.separation);

  for (double alpha : {0.25, 0.5, 1.0}) {
    int last = 0;
    for (double A : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const int n = compute_n0(2.0, A, alpha, 0.01);
      CHECK(n >= last);
      CHECK(compute_n0(2.0, 2.0 * A, alpha, 0.01) - n <= static_cast<int>(std::ceil(2.0 / alpha)));
      CHECK(compute_n0(4.0, A, alpha, 0.01) >= n);
      CHECK(compute_n0(2.0, A, alpha, 0.001) >= n);
      last = n;
    }
  }
  CHECK(compute_n0(2.0, 1.0, 0.5, [](int) { return 0.01; }) == compute_n0(2.0, 1.0, 0.5, 0.01));
  // a tau that shrinks with n0 still settles
  const int fixed = compute_n0(2.0, 1.0, 0.5, [](int n0) { return 0.5 / (n0 + 1); });
  CHECK(fixed >= compute_n0(2.0, 1.0, 0.5, 0.5 / (fixed + 1)));
  CHECK(fixed - 1 < compute_n0(2.0, 1.0, 0.5, 0.5 / fixed));
  CHECK_THROWS_AS(compute_n0(0.0, 1.0, 0.5, 0.1), UsageError);
  CHECK_THROWS_AS(compute_n0(1.0, 1.0, 0.0, 0.1), UsageError);
}

TEST_CASE("identity correspondence reproduces the embedding") {
  const auto c = cantor(1, 3, 9);
  const auto kept = sample_kept_points(c, 150, 3);
  const StretchOracle id(1, 1.0);
  const auto r = build_map(id, c, kept, params_for(c), true, 2000, 5);
  CHECK(r.audit.pass());
  CHECK(r.audit.ratio_min >= 1.0 - 1e-6);
  CHECK(r.audit.ratio_max <= 1.0 + 1e-6);
  CHECK(r.audit.pairs > 1500);
  for (double inc : r.audit.level_increments) CHECK(inc <= 1e-12);
  // the root core centre goes to p0
  const GPoint c0 = model_inv(core_center(c, kept[0], c.n0));
  for (std::size_t i = 0; i < kept.size(); ++i)
    CHECK(sup_diff(r.table.final(i), model_to_w(model_mul(c0, kept[i].g))) <= 1e-12);
  CHECK(r.audit.max_radius <= 1.0);
  CHECK(r.table.F[0].size() == 7u);
}

TEST_CASE("build is deterministic") {
  const auto c = cantor(1, 3, 8);
  const auto kept = sample_kept_points(c, 80, 9);
  const FlagOracle o(SurfaceFn::flag(1, FlagProfile::tent()));
  const auto a = build_map(o, c, kept, params_for(c), false, 300, 2);
  const auto b = build_map(o, c, kept, params_for(c), false, 300, 2);
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t k = 0; k < a.table.F[i].size(); ++k) CHECK(a.table.F[i][k] == b.table.F[i][k]);
  CHECK(a.audit.ratio_min == b.audit.ratio_min);
  CHECK(a.audit.ratio_max == b.audit.ratio_max);
}

TEST_CASE("flag build has vanishing increments") {
  const auto c = cantor(1, 3, 9);
  const auto kept = sample_kept_points(c, 120, 4);
  const auto phi = SurfaceFn::flag(1, FlagProfile::tent());
  const FlagOracle o(phi);
  const auto r = build_map(o, c, kept, params_for(c), false, 1000, 6);
  for (double inc : r.audit.level_increments) CHECK(inc <= 1e-7);
  CHECK(r.audit.cauchy_ok);
  CHECK(r.audit.ratios_ok);
  // images stay on the surface
  for (std::size_t i = 0; i < kept.size(); i += 10) {
    const HPoint& q = r.table.final(i);
    CHECK(std::abs(q[1] - phi(project_w(q))) <= 1e-7);
  }
}

TEST_CASE("bad correspondences fail the audit") {
  const auto c = cantor(1, 3, 8);
  const auto kept = sample_kept_points(c, 60, 8);
  // a stretch composes consistently, so only the ratios give it away
  const StretchOracle bad(1, 3.0);
  const auto r = build_map(bad, c, kept, params_for(c));
  CHECK(r.audit.increments_ok);
  CHECK_FALSE(r.audit.ratios_ok);
  CHECK(r.audit.ratio_min == doctest::Approx(3.0).epsilon(1e-6));
  CHECK_FALSE(r.audit.pass());

  const KickOracle kick(1, 2.0, 2.0, 1.0, 0.5);
  CHECK_THROWS_AS(build_map(kick, c, kept, params_for(c)), InvariantViolation);
  const auto k = build_map(kick, c, kept, params_for(c), false);
  CHECK_FALSE(k.audit.increments_ok);
  CHECK_FALSE(k.audit.pass());
  CHECK(k.audit.level_increments[0] > k.audit.level_bounds[0]);

  Sampler rng(1);
  const auto bases = origin_bases(1, rng, 3);
  const auto fit = verify_iso(bad, 3, bases, 100, 1);
  CHECK(fit.L >= 3.0 * (1 - 1e-9));
  CHECK(fit.L <= 3.0 * std::pow(64.0, 1.0 / 63.0));
  CHECK_FALSE(fit.pass);
  CHECK(fit.envelope == 0.0);
}

TEST_CASE("builder input validation") {
  const auto c = cantor(1, 3, 6);
  const auto kept = sample_kept_points(c, 10, 1);
  const StretchOracle id(1, 1.0);
  auto p = params_for(c);
  p.n0 = 2;
  CHECK_THROWS_AS(build_map(id, c, kept, p), UsageError);
  CHECK_THROWS_AS(build_map(id, c, {kept[0]}, params_for(c)), UsageError);
  CHECK_THROWS_AS(build_map(StretchOracle(2, 1.0), c, kept, params_for(c)), UsageError);
}

TEST_CASE("iso and comp fits") {
  Sampler rng(2);
  const auto bases = origin_bases(1, rng, 4);
  const StretchOracle id(1, 1.0);
  const auto iso = verify_iso(id, 4, bases, 50, 3);
  CHECK(iso.L == 1.0);
  CHECK(iso.A <= 1e-9);
  CHECK(iso.pass);
  CHECK(iso.samples > 150);
  CHECK(verify_comp(id, 4, bases, 50, 3).deviation <= 1e-7);

  // the kick alternates sign with the level, so consecutive scales disagree by about 2 kick |u|
  const KickOracle kick(1, 0.2);
  const auto s = sweep_scales(kick, 2, 9, bases, 40, 4, false, true);
  REQUIRE(s.comp.size() == 8u);
  CHECK(s.comp_slope == doctest::Approx(1.0).epsilon(0.1));
  CHECK(s.comp_slope < 1.2);
  for (const auto& f : s.comp) CHECK(f.deviation <= 4.0 * 0.2 * std::ldexp(1.0, -f.level) * 2.0);

  CHECK_THROWS_AS(verify_iso(id, 4, {}, 50, 1), UsageError);
  CHECK_THROWS_AS(sweep_scales(id, 5, 4, bases, 50, 1), UsageError);
}

TEST_CASE("flag oracle scale sweep") {
  Sampler rng(3);
  const auto phi = SurfaceFn::flag(1, FlagProfile::tent());
  std::vector<BasePoint> bases;
  for (int i = 0; i < 3; ++i) {
    const GPoint x = rng.gball(GPoint(1), 0.5);
    bases.push_back({x, graph_point(phi, WPoint(1, {rng.uniform(-0.5, 0.5)}, rng.uniform(-0.2, 0.2)))});
  }
  const FlagOracle o(phi);
  const auto s = sweep_scales(o, 2, 5, bases, 20, 5);
  for (const auto& f : s.iso) CHECK(f.pass);
  for (const auto& f : s.comp) CHECK(f.deviation <= 1e-7);
}

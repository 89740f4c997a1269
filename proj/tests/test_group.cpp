#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "heisrect/errors.hpp"
#include "heisrect/group.hpp"
#include "heisrect/sampling.hpp"

using namespace heisrect;

namespace {

// Product written out term by term, independent of the library's symplectic helper.
HPoint naive_mul(const HPoint& p, const HPoint& q) {
  HPoint r(p.n);
  double tw = 0.0;
  for (int i = 1; i <= p.n; ++i) tw += p[i] * q[p.n + i] - p[p.n + i] * q[i];
  for (int i = 1; i <= 2 * p.n; ++i) r[i] = p[i] + q[i];
  r.t = p.t + q.t + tw / 2;
  return r;
}

double naive_norm(const HPoint& p) {
  double s = 0;
  for (int i = 1; i <= 2 * p.n; ++i) s += p[i] * p[i];
  return std::pow(s * s + 16 * p.t * p.t, 0.25);
}

}  // namespace

TEST_CASE("product examples") {
  HPoint p(1, {0.0, 3.0}, 5.0);
  HPoint a = mul(p, HPoint(1, {1.0, 0.0}, 0.0));
  CHECK(a == HPoint(1, {1.0, 3.0}, 5.0 - 1.5));

  HPoint q = mul(HPoint(2, {1, 0, 0, 0}, 0), HPoint(2, {0, 0, 1, 0}, 0));
  CHECK(q == HPoint(2, {1, 0, 1, 0}, 0.5));

  Sampler s(3);
  for (int n = 1; n <= 3; ++n) {
    HPoint g = s.hpoint(n, -5, 5);
    CHECK(mul(HPoint(n), g) == g);
    CHECK(mul(g, HPoint(n)) == g);
  }
}

TEST_CASE("inverse") {
  CHECK(inv(HPoint(1)) == HPoint(1));
  CHECK(inv(HPoint(1, {1, 2}, 3)) == HPoint(1, {-1, -2}, -3));
  Sampler s(4);
  for (int i = 0; i < 100; ++i) {
    HPoint g = s.hpoint(2, -10, 10);
    CHECK(inv(inv(g)) == g);
    CHECK(sup_diff(mul(g, inv(g)), HPoint(2)) == 0.0);
  }
}

TEST_CASE("norm and distance") {
  HPoint e(2, {0, 0, 0, 0}, 1);
  CHECK(norm(e) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(norm(HPoint(2, {1, 0, 0, 0}, 0)) == doctest::Approx(1.0).epsilon(1e-15));
  Sampler s(5);
  for (int i = 0; i < 200; ++i) {
    HPoint p = s.hpoint(2, -3, 3), q = s.hpoint(2, -3, 3);
    CHECK(dist(p, p) == 0.0);
    CHECK(dist(p, q) == doctest::Approx(dist(q, p)).epsilon(1e-12));
    CHECK(norm(p) == doctest::Approx(naive_norm(p)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(dist(HPoint(1), HPoint(2)), UsageError);
}

TEST_CASE("dilation") {
  CHECK(dilate(HPoint(1, {1, 1}, 1), 2.0) == HPoint(1, {2, 2}, 4));
  CHECK_THROWS_AS(dilate(HPoint(1), 0.0), UsageError);
  Sampler s(6);
  HPoint p = s.hpoint(3, -2, 2), q = s.hpoint(3, -2, 2);
  CHECK(dist(dilate(p, 3), dilate(q, 3)) / dist(p, q) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("split") {
  Split a = split(HPoint(1, {1, 2}, 3));
  CHECK(a.w == WPoint(1, {2}, 4));
  CHECK(a.v == 1.0);
  Split b = split(HPoint(2, {0, 1, 2, 3}, 4));
  CHECK(b.w == WPoint(2, {1, 2, 3}, 4));
  CHECK(b.v == 0.0);
  Sampler s(7);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 10000; ++i) {
      HPoint p = s.hpoint(n, -10, 10);
      Split sp = split(p);
      HPoint back = mul(embed(sp.w), vertical(n, sp.v));
      REQUIRE(sup_diff(back, p) <= 1e-12 * (1 + std::abs(p.t)));
    }
  }
}

TEST_CASE("group laws against a term-by-term product") {
  Sampler s(8);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 2000; ++i) {
      HPoint p = s.hpoint(n, -10, 10), q = s.hpoint(n, -10, 10), r = s.hpoint(n, -10, 10);
      REQUIRE(sup_diff(mul(p, q), naive_mul(p, q)) <= 1e-12 * 200);
      REQUIRE(sup_diff(mul(mul(p, q), r), mul(p, mul(q, r))) <= 1e-10 * 100);
      const double d = dist(p, q);
      REQUIRE(std::abs(dist(mul(r, p), mul(r, q)) - d) <= 1e-9 * (1 + d));
    }
  }
}

TEST_CASE("commutator relation") {
  Sampler s(9);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 1000; ++i) {
      HPoint a = s.hpoint(n, -5, 5), b = s.hpoint(n, -5, 5);
      HPoint lhs = mul(mul(inv(b), a), b);
      HPoint c(n);
      c.t = symplectic(n, a.x, b.x);
      REQUIRE(sup_diff(lhs, mul(a, c)) <= 1e-10 * 100);
    }
  }
}

TEST_CASE("model groups") {
  CHECK(model_dist(GPoint::plane(0, 0), GPoint::plane(0, 1)) == doctest::Approx(2.0));
  CHECK(model_embed(GPoint::plane(2, 3)) == WPoint(1, {2}, 3));
  CHECK(model_embed(GPoint::product(2, {1, 2}, 3, 4)) == WPoint(2, {1, 4, 2}, 3));

  Sampler s(10);
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 1000; ++i) {
      GPoint g = s.gball(GPoint(n), 3.0), h = s.gball(GPoint(n), 3.0);
      CHECK(model_from_w(model_embed(g)) == g);
      const double dg = model_dist(g, h);
      const double dh = dist(embed(model_embed(g)), embed(model_embed(h)));
      REQUIRE(std::abs(dg - dh) <= 1e-12 * (1 + dg));
      WPoint lhs = model_embed(model_mul(g, h));
      WPoint rhs = wmul(model_embed(g), model_embed(h));
      REQUIRE(sup_diff(embed(lhs), embed(rhs)) <= 1e-12 * 10);
    }
  }
  CHECK(model_mul(GPoint(2), GPoint::product(2, {1, 2}, 3, 4)) == GPoint::product(2, {1, 2}, 3, 4));
  CHECK_THROWS_AS(model_mul(GPoint(1), GPoint(2)), UsageError);
}

TEST_CASE("arity checks") {
  CHECK_THROWS_AS(HPoint(0), UsageError);
  CHECK_THROWS_AS(HPoint(kMaxN + 1), UsageError);
  CHECK_THROWS_AS(mul(HPoint(1), HPoint(2)), UsageError);
  CHECK_THROWS_AS(HPoint(1, {1.0}, 0.0), UsageError);
}

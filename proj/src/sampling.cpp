#include "heisrect/sampling.hpp"

#include "heisrect/errors.hpp"

namespace heisrect {

HPoint Sampler::hpoint(int n, double lo, double hi) {
  HPoint p(n);
  for (int i = 0; i < p.dim(); ++i) p.x[i] = uniform(lo, hi);
  p.t = uniform(lo, hi);
  return p;
}

WPoint Sampler::wbox(const WPoint& center, double hr, double vr) {
  WPoint w = center;
  for (int i = 0; i < w.dim(); ++i) w.y[i] += uniform(-hr, hr);
  w.t += uniform(-vr, vr);
  return w;
}

GPoint Sampler::gball(const GPoint& center, double r) {
  if (!(r > 0.0)) throw UsageError("ball radius must be positive");
  GPoint u(center.n);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    for (int i = 0; i < u.zdim(); ++i) u.z[i] = uniform(-r, r);
    u.s = uniform(-r, r);
    u.t = uniform(-0.25 * r * r, 0.25 * r * r);
    if (model_norm(u) <= r) return model_mul(center, u);
  }
  throw NumericalFailure("ball rejection sampling did not accept a point");
}

}  // namespace heisrect

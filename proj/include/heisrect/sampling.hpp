#pragma once

#include <cstdint>
#include <random>

#include "heisrect/group.hpp"

namespace heisrect {

// Seeded source of uniform samples.  Doubles are built directly from the
// 64-bit engine output so that streams agree across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * unit(); }
  std::uint64_t bits() { return rng_(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(unit() * static_cast<double>(n)); }

  HPoint hpoint(int n, double lo, double hi);
  // horizontal coordinates in center +- hr, t in center.t +- vr
  WPoint wbox(const WPoint& center, double hr, double vr);
  // uniform (by rejection) in the model-group ball B(center, r)
  GPoint gball(const GPoint& center, double r);

 private:
  std::mt19937_64 rng_;
};

}  // namespace heisrect

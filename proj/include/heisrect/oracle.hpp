#pragma once

#include <cstdint>

#include "heisrect/group.hpp"

namespace heisrect {

// F : G -> W, (z, t, s) -> (0, z_1..z_{n-1}, s, z_n..z_{2n-2}, t).  A group
// homomorphism onto the vertical subgroup.
HPoint model_to_w(const GPoint& g);

// Scale-indexed correspondence maps i^n_{x->p} from the model group into H^n.
class CorrespondenceOracle {
 public:
  CorrespondenceOracle(int n, double L, double A, double alpha);
  virtual ~CorrespondenceOracle() = default;

  int n() const { return n_; }
  double declared_L() const { return L_; }
  double declared_A() const { return A_; }
  double declared_alpha() const { return alpha_; }

  // i^level_{x->p}(v); depends on (x, v) only through x^-1 v.
  HPoint eval(int level, const GPoint& x, const HPoint& p, const GPoint& v) const;
  virtual HPoint eval_rel(int level, const HPoint& p, const GPoint& u) const = 0;
  // The exact approximant the oracle snaps to the surface; eval_rel by default.
  virtual HPoint model_rel(int level, const HPoint& p, const GPoint& u) const { return eval_rel(level, p, u); }

 private:
  int n_;
  double L_, A_, alpha_;
};

// p . F(delta_lambda u).  lambda = 1 is the exact correspondence of the flat surface.
class StretchOracle : public CorrespondenceOracle {
 public:
  StretchOracle(int n, double lambda, double L = 1.0, double A = 1.0, double alpha = 0.5);
  HPoint eval_rel(int level, const HPoint& p, const GPoint& u) const override;

 private:
  double lambda_;
};

// p . F(u) . ((-1)^level kick ||u||, 0, ..., 0): fixes the base point and stays
// bilipschitz, but consecutive scales disagree to first order.
class KickOracle : public CorrespondenceOracle {
 public:
  KickOracle(int n, double kick, double L = 2.0, double A = 1.0, double alpha = 0.5);
  HPoint eval_rel(int level, const HPoint& p, const GPoint& u) const override;
  HPoint model_rel(int level, const HPoint& p, const GPoint& u) const override;

 private:
  double kick_;
};

}  // namespace heisrect

#include "heisrect/oracle.hpp"

#include "heisrect/errors.hpp"

namespace heisrect {

HPoint model_to_w(const GPoint& g) { return embed(model_embed(g)); }

CorrespondenceOracle::CorrespondenceOracle(int n, double L, double A, double alpha)
    : n_(n), L_(L), A_(A), alpha_(alpha) {
  check_arity(n);
  if (!(L >= 1.0)) throw UsageError("declared L must be at least 1");
  if (!(A >= 0.0)) throw UsageError("declared A must be non-negative");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("declared alpha must lie in (0, 1]");
}

HPoint CorrespondenceOracle::eval(int level, const GPoint& x, const HPoint& p, const GPoint& v) const {
  if (x.n != n_ || v.n != n_ || p.n != n_) throw UsageError("oracle arity mismatch");
  return eval_rel(level, p, model_mul(model_inv(x), v));
}

StretchOracle::StretchOracle(int n, double lambda, double L, double A, double alpha)
    : CorrespondenceOracle(n, L, A, alpha), lambda_(lambda) {
  if (!(lambda > 0.0)) throw UsageError("stretch must be positive");
}

HPoint StretchOracle::eval_rel(int, const HPoint& p, const GPoint& u) const {
  return mul(p, model_to_w(model_dilate(u, lambda_)));
}

KickOracle::KickOracle(int n, double kick, double L, double A, double alpha)
    : CorrespondenceOracle(n, L, A, alpha), kick_(kick) {}

HPoint KickOracle::eval_rel(int level, const HPoint& p, const GPoint& u) const {
  HPoint k(n());
  k[1] = (level % 2 == 0 ? kick_ : -kick_) * model_norm(u);
  return mul(model_rel(level, p, u), k);
}

HPoint KickOracle::model_rel(int, const HPoint& p, const GPoint& u) const { return mul(p, model_to_w(u)); }

}  // namespace heisrect

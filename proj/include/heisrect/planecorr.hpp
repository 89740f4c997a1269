#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "heisrect/graph.hpp"
#include "heisrect/oracle.hpp"
#include "heisrect/surface.hpp"

namespace heisrect {

// D = (a_2..a_n, c, b_2..b_n): the intrinsic gradient at a base point, in the
// order returned by intrinsic_gradient.
struct PlaneParams {
  int n = 2;
  std::vector<double> D;

  double a(int i) const { return D[static_cast<std::size_t>(i - 2)]; }
  double c() const { return D[static_cast<std::size_t>(n - 1)]; }
  double b(int i) const { return D[static_cast<std::size_t>(n + i - 2)]; }
};

PlaneParams plane_params(int n, std::vector<double> D);

// psi_D(x_2..x_2n) = c x_{n+1} + sum_i (a_i x_i + b_i x_{n+i})
double psi_D_value(const PlaneParams& D, const WPoint& w);
// The isomorphism of W onto {x_1 = psi_D}.
HPoint psi_D(const PlaneParams& D, const WPoint& w);
double psi_D_drift(const PlaneParams& D, const PlaneParams& E, const WPoint& w);

// Tan^w_p(v) = Psi_{D_p}(F(w^-1 v))
HPoint tan_map(const PlaneParams& Dp, const GPoint& w, const GPoint& v);

struct PlaneOracleOptions {
  double tol = 1e-9;  // nearest-point tolerance at unit scale; scaled by 4^-level
  double quantum = 1e-8;
  double L = 0.0, A = 0.0, alpha = 0.0;  // 0: derived from the declared regularity
};

// i^n_{w->p}(v): the nearest point on S to p . Tan^w_p(v).
class PlaneOracle : public CorrespondenceOracle {
 public:
  PlaneOracle(SurfaceFn phi, PlaneOracleOptions opt = {});

  HPoint eval_rel(int level, const HPoint& p, const GPoint& u) const override;
  HPoint model_rel(int level, const HPoint& p, const GPoint& u) const override;
  // intrinsic gradient at pi_W(p), quantized
  PlaneParams gradient_at(const HPoint& p) const;
  const SurfaceFn& surface() const { return phi_; }

 private:
  SurfaceFn phi_;
  PlaneOracleOptions opt_;
  mutable std::mutex mu_;
  mutable std::map<std::vector<double>, PlaneParams> cache_;
};

// L_p(y, t) = (0, y, t) . (<grad, y>, 0, ..., 0), a point of the vertical tangent plane at 0
HPoint tangent_lift(const std::vector<double>& grad, const WPoint& yt);

struct PlaneApprox {
  double d = 0.0;      // d(p, q)
  double error = 0.0;  // dist(q, S)
  double comparability = 0.0;  // ||L_p(y, t)|| / ||(y, t)||
};
// p = Phi(w0), q = p . L_p(y, t)
PlaneApprox plane_approx_error(const SurfaceFn& phi, const WPoint& w0, const WPoint& yt, double tol = 1e-6);

}  // namespace heisrect

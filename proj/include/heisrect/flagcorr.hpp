#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "heisrect/graph.hpp"
#include "heisrect/oracle.hpp"
#include "heisrect/surface.hpp"

namespace heisrect {

// tau' = phi^(p^-1)(s, tau), tau(0) = 0, on the grid s = k * step, |s| <= range.
class TauSolution {
 public:
  HPoint p;
  double range = 0.0;
  double step = 0.0;
  bool exact = false;  // flag surfaces integrate in closed form

  double operator()(double s) const;
  // sup over nonzero grid nodes of |tau(s)| / s^2
  double quadratic_constant() const;
  const std::vector<double>& nodes() const { return tau_; }

 private:
  friend TauSolution solve_tau(const SurfaceFn& phi, const HPoint& p, double range, double step);
  std::vector<double> tau_, slope_;  // index k + half for s = k * step
  int half = 0;
  const FlagProfile* profile_ = nullptr;
  SurfaceFn phi_ = SurfaceFn::constant(1, 0.0);
};

TauSolution solve_tau(const SurfaceFn& phi, const HPoint& p, double range, double step);

// (psi(y), y, t - y psi(y) / 2 + int_0^y psi)
HPoint flag_param(const FlagProfile& psi, double y, double t);

// psi_p(y) = phi^(p^-1)(y, tau_p(y))
double psi_p(const SurfaceFn& phi, const TauSolution& tau, double y);
// Psi_p(y, t) = Phi^(p^-1)(y, tau_p(y)) . (0, 0, t)
HPoint Psi_p(const SurfaceFn& phi, const TauSolution& tau, double y, double t);
// d(Psi_p(y, t), Phi^(p^-1)(y, tau_p(y) + t))
double flag_approx_error(const SurfaceFn& phi, const TauSolution& tau, double y, double t);

struct FlagOracleOptions {
  double tol = 1e-9;       // nearest-point tolerance at unit scale; scaled by 4^-level
  double ode_step = 1.0 / 64;  // relative to 2^-level
  double range = 8.0;      // tau range, relative to 2^-level
  double L = 0.0, A = 0.0, alpha = 0.0;  // 0: derived from the surface's declared regularity
};

// i^n_{w->p}(v): the nearest point on S to p . Psi_p(w^-1 v).
class FlagOracle : public CorrespondenceOracle {
 public:
  FlagOracle(SurfaceFn phi, FlagOracleOptions opt = {});

  HPoint eval_rel(int level, const HPoint& p, const GPoint& u) const override;
  HPoint model_rel(int level, const HPoint& p, const GPoint& u) const override;
  std::shared_ptr<const TauSolution> tau(int level, const HPoint& p) const;
  const SurfaceFn& surface() const { return phi_; }
  const FlagOracleOptions& options() const { return opt_; }

 private:
  SurfaceFn phi_;
  FlagOracleOptions opt_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, std::vector<double>>, std::shared_ptr<const TauSolution>> cache_;
};

struct NeighborhoodCheck {
  double delta = 0.0;    // H r^{1+alpha}
  double c1 = 0.0;       // surface samples against the flag through p
  double c2 = 0.0;       // flag samples against the surface
  double c3 = 0.0;       // planar projection of surface samples against the flag curve
  int samples1 = 0, samples2 = 0;
};

// Both one-sided distance quotients between p^-1 S and Psi_p(W) inside B(0, r).
NeighborhoodCheck neighborhood_check(const SurfaceFn& phi, const HPoint& p, double r, int samples,
                                     std::uint64_t seed, double tol = 1e-10);

}  // namespace heisrect

#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "heisrect/cubes.hpp"
#include "heisrect/group.hpp"
#include "heisrect/oracle.hpp"

namespace heisrect {

// 1 / (1 - 2^{-(1+alpha)})
double geometric_constant(double alpha);

struct N0Thresholds {
  double separation = 0.0;  // A 2^{-n(1+a)} <= tau 2^{-(n+1)(1+eps)} / (4L)
  double tail = 0.0;        // the same with the geometric tail and 8L
  double distortion = 0.0;  // (L + A(1+G)) 2^{-n} <= 1/2
  double scale = 0.0;       // 2^{-n} <= 1/(4L)
  int n0 = 0;
};
N0Thresholds n0_thresholds(double L, double A, double alpha, double tau);
int compute_n0(double L, double A, double alpha, double tau);
// Smallest n0 with n0 >= compute_n0(L, A, alpha, tau_of(n0)), for a tau that depends on n0.
int compute_n0(double L, double A, double alpha, const std::function<double(int)>& tau_of, int limit = 400);

struct BuildParams {
  int n0 = 0;
  int nmax = 0;
  double epsilon = 0.0;
  double tau = 0.0;
  HPoint p0;
  GPoint x0;
};

// F_n at every level for each kept point.  F[i][k] and increment[i][k] refer to
// level n0 + k; increment[i][0] is measured from p0.
struct MapTable {
  int n0 = 0, nmax = 0;
  HPoint p0;
  std::vector<GPoint> g;
  std::vector<std::vector<HPoint>> F;
  std::vector<std::vector<double>> increment;

  const HPoint& final(std::size_t i) const { return F[i].back(); }
};

struct BilipAudit {
  double L = 0.0, A = 0.0, alpha = 0.0;
  std::vector<double> level_increments;  // [k]: max d(F_{n0+k}, F_{n0+k+1})
  std::vector<double> level_bounds;      // [k]: A 2^{-(n0+k)(1+alpha)}
  double increment_sum = 0.0;
  double geometric_bound = 0.0;  // A 2^{-n0(1+alpha)} G
  double residual_bound = 0.0;   // A 2^{-nmax(1+alpha)} G
  double ratio_min = 0.0, ratio_max = 0.0;
  int pairs = 0;
  double max_radius = 0.0;  // max d(p0, F(g))
  double fitted_iso_L = 0.0, fitted_iso_A = 0.0, fitted_comp_A = 0.0;
  bool increments_ok = true, cauchy_ok = true, ball_ok = true, ratios_ok = true;
  bool pass() const { return increments_ok && cauchy_ok && ball_ok && ratios_ok; }
};

struct BuildResult {
  MapTable table;
  BilipAudit audit;
};

// Runs the recursion F_n|_Q = i^n_{c_Q -> F_{n-1}(c_Q)} over the cores of each kept
// point.  With enforce set, an increment above its bound throws InvariantViolation.
BuildResult build_map(const CorrespondenceOracle& oracle, const CantorRealization& cantor,
                      const std::vector<KeptPoint>& kept, const BuildParams& params, bool enforce = true,
                      int pairs = 1000, std::uint64_t seed = 1);

// Fills the ratio, Cauchy and ball parts of an audit from a table.
void audit_bilip(const MapTable& table, BilipAudit& audit, int pairs, std::uint64_t seed);

// Base point (x, p) with p on the surface.
using BasePoint = std::pair<GPoint, HPoint>;

struct IsoFit {
  int level = 0;
  double L = 0.0;  // smallest grid constant bounding the distortion of the exact approximant
  double A = 0.0;  // least A making both inequalities hold at L, in units of 2^{-n(1+alpha)}
  double envelope = 0.0;  // max |d_M - d_model|
  int samples = 0;
  bool pass = false;  // L <= slack * declared L and A <= slack * declared A
};
IsoFit verify_iso(const CorrespondenceOracle& oracle, int level, const std::vector<BasePoint>& bases, int samples,
                  std::uint64_t seed, double slack = 1.1);

struct CompFit {
  int level = 0;
  double deviation = 0.0;  // max d(i^n_{x->p}(z), i^{n+1}_{y->q}(z))
  double A = 0.0;          // deviation / 2^{-n(1+alpha)}
  int samples = 0;
};
CompFit verify_comp(const CorrespondenceOracle& oracle, int level, const std::vector<BasePoint>& bases, int samples,
                    std::uint64_t seed);

struct ScaleSweep {
  std::vector<IsoFit> iso;
  std::vector<CompFit> comp;
  double envelope_slope = 0.0;  // log2 envelope against n
  double comp_slope = 0.0;      // log deviation against log 2^{-n}
};
ScaleSweep sweep_scales(const CorrespondenceOracle& oracle, int first, int last, const std::vector<BasePoint>& bases,
                        int samples, std::uint64_t seed, bool iso = true, bool comp = true);

}  // namespace heisrect

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "heisrect/group.hpp"
#include "heisrect/surface.hpp"

namespace heisrect {

using WFunction = std::function<double(const WPoint&)>;

struct GraphPoint {
  WPoint w;
  HPoint p;
};

inline constexpr double kGradientStep = 1e-5;

// Phi(w) = w . (phi(w), 0, ..., 0)
HPoint graph_point(const WFunction& f, const WPoint& w);
HPoint graph_point(const SurfaceFn& phi, const WPoint& w);
GraphPoint graph_map(const SurfaceFn& phi, const WPoint& w);

// phi^(p^-1)(w) = -p_1 + phi(pi_W(p.w)); its graph is p^-1 . S
double translate_fn(const SurfaceFn& phi, const HPoint& p, const WPoint& w);
WFunction translated(const SurfaceFn& phi, const HPoint& p);

// Central differences along the flows of D_j, j = 2..2n, in that order.
// D_j = X_j for j != n+1; D_{n+1} = d/dx_{n+1} + f d/dt, advanced by one RK4 step.
std::vector<double> intrinsic_gradient(const WFunction& f, int n, const WPoint& w, double h = kGradientStep);
std::vector<double> intrinsic_gradient(const SurfaceFn& phi, const WPoint& w, double h = kGradientStep);

// (-1, grad)/sqrt(1 + |grad|^2)
std::vector<double> normal(const SurfaceFn& phi, const WPoint& w, double h = kGradientStep);

// sup over pairs of |pi_V(Phi(w)^-1 Phi(w'))| / ||pi_W(Phi(w)^-1 Phi(w'))||
double lip_estimate(const SurfaceFn& phi, const std::vector<WPoint>& samples);

// Each sample is (w0, w) with p = Phi(w0); quotient
// |grad(pi_W(p.w)) - grad(w0)| / ||w||^alpha.
double check_holder_gradient(const SurfaceFn& phi, double alpha,
                             const std::vector<std::pair<WPoint, WPoint>>& samples, double h = kGradientStep);

struct VerticalHolder {
  double small = 0.0;  // gaps <= 1, exponent (1+alpha)/2
  double large = 0.0;  // gaps > 1, exponent (1-alpha)/2
};
// Each sample is (w, t'): compares phi(y, t) with phi(y, t').
VerticalHolder check_vertical_holder(const SurfaceFn& phi, double alpha,
                                     const std::vector<std::pair<WPoint, double>>& samples);

// |phi^(p^-1)(y,t) - <grad(w0), y>| with p = Phi(w0)
double linear_approx_error(const SurfaceFn& phi, const WPoint& w0, const WPoint& yt, double h = kGradientStep);

struct SearchWindow {
  double horizontal = 0.0;
  double vertical = 0.0;
};

struct NearestOptions {
  int coarse = 33;
  int max_levels = 20;
  double tol = 1e-9;
};

struct NearestResult {
  WPoint w;
  HPoint point;
  double distance = 0.0;
  int levels = 0;
};

// Minimizes d(z, Phi(w)) over w = pi_W(z.u), u in seed +- window (the chart of
// W centred at z): coarse grid, then dyadic refinement.  Returns the global w.
NearestResult nearest_point(const WFunction& f, const HPoint& z, const WPoint& seed, SearchWindow window,
                            const NearestOptions& opt);
NearestResult nearest_point(const SurfaceFn& phi, const HPoint& z, const WPoint& seed, SearchWindow window,
                            const NearestOptions& opt);

// Chart window around u = 0 containing every candidate within distance e of z.
SearchWindow certified_window(double e);

// nearest_point seeded at u = 0 (that is w = pi_W(z)) with the certified window.
NearestResult project_to_graph(const WFunction& f, const HPoint& z, const NearestOptions& opt);
NearestResult project_to_graph(const SurfaceFn& phi, const HPoint& z, const NearestOptions& opt);

// Korányi distances cannot resolve rounding below about sqrt(eps) |q|.
double rounding_floor(const HPoint& q);
// The projection of q onto the graph, or q itself when it is already on the graph
// to working precision.
HPoint snap_to_graph(const SurfaceFn& phi, const HPoint& q, const NearestOptions& opt);

}  // namespace heisrect

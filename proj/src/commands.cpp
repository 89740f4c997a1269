#include "heisrect/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "CLI11.hpp"

#include "heisrect/cubes.hpp"
#include "heisrect/errors.hpp"
#include "heisrect/fit.hpp"
#include "heisrect/flagcorr.hpp"
#include "heisrect/graph.hpp"
#include "heisrect/planecorr.hpp"
#include "heisrect/sampling.hpp"

namespace heisrect {

namespace {

double finite_or_throw(double x, const char* what) {
  if (!std::isfinite(x)) throw NumericalFailure(std::string("non-finite ") + what);
  return x;
}

std::vector<std::string> w_names(int n) {
  std::vector<std::string> out;
  for (int j = 2; j <= 2 * n; ++j) out.push_back("x" + std::to_string(j));
  out.push_back("t");
  return out;
}

std::vector<std::string> g_names(int n) {
  std::vector<std::string> out;
  for (int j = 1; j <= 2 * n - 2; ++j) out.push_back("g_z" + std::to_string(j));
  out.push_back("g_s");
  out.push_back("g_t");
  return out;
}

std::vector<std::string> h_names(int n) {
  std::vector<std::string> out;
  for (int j = 1; j <= 2 * n; ++j) out.push_back("F_x" + std::to_string(j));
  out.push_back("F_t");
  return out;
}

void push_w(std::vector<Cell>& row, const WPoint& w) {
  for (int i = 0; i < w.dim(); ++i) row.emplace_back(w.y[i]);
  row.emplace_back(w.t);
}

// log-log fit, or an empty fit when fewer than two errors are positive
LineFit positive_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (std::count_if(y.begin(), y.end(), [](double v) { return v > 0.0; }) < 2) return {};
  return fit_loglog(x, y);
}

Json declared_json(const CorrespondenceOracle& o) {
  return {{"L", o.declared_L()}, {"A", o.declared_A()}, {"alpha", o.declared_alpha()}};
}

// (gap, exponent regime) samples for Hoelder quotients: log-uniform gaps in [1e-4, 10]
std::vector<std::pair<WPoint, double>> gap_samples(const RunConfig& c, Sampler& rng) {
  std::vector<std::pair<WPoint, double>> out;
  const WPoint w0 = base_point(c);
  for (int i = 0; i < c.count; ++i) {
    const WPoint w = rng.wbox(w0, 1.0, 1.0);
    const double gap = std::pow(10.0, rng.uniform(-4.0, 1.0)) * (rng.unit() < 0.5 ? -1.0 : 1.0);
    out.push_back({w, w.t + gap});
  }
  return out;
}

Report surface_info(RunConfig& c) {
  const SurfaceFn phi = make_surface(c);
  const auto oracle = make_oracle(c, phi);
  Sampler rng(c.seed);
  std::vector<WPoint> ws;
  for (int i = 0; i < c.count; ++i) ws.push_back(rng.wbox(base_point(c), 1.0, 1.0));
  const Regularity& r = phi.declared();
  const VerticalHolder vh = check_vertical_holder(phi, r.alpha, gap_samples(c, rng));

  Report out;
  out.table.columns = {"key", "value"};
  out.table.add({std::string("kind"), phi.kind_name()});
  out.table.add({std::string("n"), std::int64_t{phi.n()}});
  out.table.add({std::string("declared_alpha"), r.alpha});
  out.table.add({std::string("declared_H"), r.H});
  out.table.add({std::string("declared_L"), r.L});
  out.table.add({std::string("support_radius"), r.support_radius});
  out.table.add({std::string("t_independent"), phi.t_independent()});
  out.table.add({std::string("lip_estimate"), finite_or_throw(lip_estimate(phi, ws), "Lipschitz estimate")});
  out.table.add({std::string("vertical_holder_small"), vh.small});
  out.table.add({std::string("vertical_holder_large"), vh.large});
  out.table.add({std::string("oracle_L"), oracle->declared_L()});
  out.table.add({std::string("oracle_A"), oracle->declared_A()});
  out.table.add({std::string("oracle_alpha"), oracle->declared_alpha()});
  return out;
}

Report gradient(RunConfig& c) {
  const SurfaceFn phi = make_surface(c);
  Sampler rng(c.seed);
  Report out;
  out.table.columns = w_names(c.n);
  for (int j = 2; j <= 2 * c.n; ++j) out.table.columns.push_back("D" + std::to_string(j));
  for (int i = 0; i < c.count; ++i) {
    const WPoint w = rng.wbox(base_point(c), 1.0, 1.0);
    std::vector<Cell> row;
    push_w(row, w);
    for (double g : intrinsic_gradient(phi, w)) row.emplace_back(finite_or_throw(g, "gradient component"));
    out.table.add(std::move(row));
  }
  return out;
}

Report vertical_holder(RunConfig& c) {
  const SurfaceFn phi = make_surface(c);
  const Regularity& r = phi.declared();
  Sampler rng(c.seed);
  Report out;
  out.table.columns = {"gap", "quotient"};
  double small = 0.0, large = 0.0;
  for (const auto& [w, t2] : gap_samples(c, rng)) {
    const VerticalHolder q = check_vertical_holder(phi, r.alpha, {{w, t2}});
    const double gap = std::abs(t2 - w.t);
    const double v = gap <= 1.0 ? q.small : q.large;
    out.table.add({gap, finite_or_throw(v, "Hoelder quotient")});
    small = std::max(small, q.small);
    large = std::max(large, q.large);
  }
  out.pass = small <= c.slack * r.H;
  out.summary = {{"H_small", small}, {"H_large", large}, {"declared_H", r.H}, {"declared_alpha", r.alpha}};
  return out;
}

Report verify_iso_cmd(RunConfig& c) {
  const SurfaceFn phi = make_surface(c);
  const auto oracle = make_oracle(c, phi);
  resolve_scales(c, *oracle);
  const auto bases = make_bases(c, phi);
  const auto s = sweep_scales(*oracle, *c.n0, c.nmax, bases, c.count, c.seed, true, false);
  Report out;
  out.table.columns = {"n", "L_hat", "A_hat", "pass", "envelope"};
  for (const auto& f : s.iso) {
    out.table.add({std::int64_t{f.level}, f.L, f.A, f.pass, f.envelope});
    out.pass = out.pass && f.pass;
  }
  out.summary = {{"envelope_slope", s.envelope_slope}, {"declared", declared_json(*oracle)}};
  return out;
}

Report verify_comp_cmd(RunConfig& c) {
  const SurfaceFn phi = make_surface(c);
  const auto oracle = make_oracle(c, phi);
  resolve_scales(c, *oracle);
  const auto bases = make_bases(c, phi);
  const auto s = sweep_scales(*oracle, *c.n0, c.nmax, bases, c.count, c.seed, false, true);
  const double A = oracle->declared_A(), alpha = oracle->declared_alpha();
  Report out;
  out.table.columns = {"scale", "deviation", "slope", "pass"};
  double worst = 0.0;
  for (const auto& f : s.comp) {
    const double scale = std::ldexp(1.0, -f.level);
    const bool ok = f.deviation <= c.slack * A * std::pow(scale, 1.0 + alpha) + c.zero;
    out.table.add({scale, f.deviation, s.comp_slope, ok});
    out.pass = out.pass && ok;
    worst = std::max(worst, f.deviation);
  }
  // the slope only means something once deviations rise above numerical zero
  const double target = 1.0 + alpha - c.slope_slack;
  const bool slope_ok = worst <= c.zero || s.comp.size() < 2 || s.comp_slope >= target;
  out.pass = out.pass && slope_ok;
  out.summary = {{"slope", s.comp_slope}, {"slope_target", target}, {"slope_ok", slope_ok},
                 {"declared", declared_json(*oracle)}};
  return out;
}

Json axis_json(const AxisFamily& f) {
  Json levels = Json::array();
  for (const auto& L : f.levels) {
    Json cells = Json::array();
    // deep vertical families are large; only their size is reported
    const bool list = L.cells.size() <= 4096;
    if (list)
      for (const auto& cell : L.cells) cells.push_back({cell.lo, cell.hi, cell.core_lo, cell.core_hi});
    levels.push_back({{"margin", L.margin},
                      {"cells", static_cast<std::int64_t>(L.cells.size())},
                      {"kept_length", L.kept_length()},
                      {"cores", list ? cells : Json(nullptr)}});
  }
  return {{"split", f.split}, {"levels", levels}};
}

CantorRealization make_cantor(RunConfig& c) {
  CantorParams p;
  p.n = c.n;
  p.n0 = *c.n0;
  p.nmax = c.nmax;
  p.alpha = c.cantor_alpha;
  p.tau = c.tau;
  p.x0 = GPoint(c.n);
  return build_fat_cantor(p);
}

Report cantor_cmd(RunConfig& c) {
  const SurfaceFn phi = make_surface(c);
  const auto oracle = make_oracle(c, phi);
  resolve_scales(c, *oracle);
  const CantorRealization r = make_cantor(c);
  Report out;
  out.table.columns = {"level",    "cubes_alive", "measure_kept", "min_separation", "required_separation",
                       "separated", "diameter",    "diameter_ok",  "loss",           "loss_bound"};
  Json levels = Json::array();
  for (const auto& L : r.levels) {
    out.table.add({std::int64_t{L.level}, static_cast<std::int64_t>(L.cubes_alive), L.measure_kept, L.min_separation,
                   L.required_separation, L.separated, L.diameter, L.diameter_ok, L.loss, L.loss_bound});
    out.pass = out.pass && L.separated;
    levels.push_back({{"level", L.level},
                      {"cubes_alive", L.cubes_alive},
                      {"measure_kept", L.measure_kept},
                      {"min_separation", L.min_separation},
                      {"required_separation", L.required_separation},
                      {"diameter", L.diameter},
                      {"separated", L.separated},
                      {"diameter_ok", L.diameter_ok}});
  }
  const double fraction = r.measure_kept / r.measure_root;
  out.pass = out.pass && fraction >= 0.5;
  Json axes = Json::array();
  for (const auto& f : r.axes) axes.push_back(axis_json(f));
  out.summary = {{"tau", r.tau},
                 {"epsilon", r.epsilon},
                 {"twist", r.twist},
                 {"root", {{"lo", r.root.box.lo}, {"hi", r.root.box.hi}, {"center", axis_coords(r.root.center)}}},
                 {"measure_root", r.measure_root},
                 {"measure_kept", r.measure_kept},
                 {"kept_fraction", fraction},
                 {"predicted_fraction", r.predicted_kept},
                 {"measure_ball", r.measure_ball},
                 {"levels", levels},
                 {"axes", axes}};
  return out;
}

BuildResult build(RunConfig& c, std::vector<KeptPoint>& kept) {
  const SurfaceFn phi = make_surface(c);
  const auto oracle = make_oracle(c, phi);
  resolve_scales(c, *oracle);
  const CantorRealization r = make_cantor(c);
  kept = sample_kept_points(r, c.count, c.seed);
  BuildParams p;
  p.n0 = r.n0;
  p.nmax = r.nmax;
  p.epsilon = r.epsilon;
  p.tau = r.tau;
  p.p0 = graph_point(phi, base_point(c));
  p.x0 = GPoint(c.n);
  return build_map(*oracle, r, kept, p, false, c.pairs, c.seed);
}

Json audit_json(const BilipAudit& a) {
  return {{"L", a.L},
          {"A", a.A},
          {"alpha", a.alpha},
          {"ratio_min", a.ratio_min},
          {"ratio_max", a.ratio_max},
          {"pairs", a.pairs},
          {"increment_sum", a.increment_sum},
          {"geometric_bound", a.geometric_bound},
          {"residual_bound", a.residual_bound},
          {"max_radius", a.max_radius},
          {"level_increments", a.level_increments},
          {"level_bounds", a.level_bounds},
          {"increments_ok", a.increments_ok},
          {"cauchy_ok", a.cauchy_ok},
          {"ball_ok", a.ball_ok},
          {"ratios_ok", a.ratios_ok}};
}

Report build_map_cmd(RunConfig& c) {
  std::vector<KeptPoint> kept;
  const BuildResult b = build(c, kept);
  Report out;
  out.table.columns = {"level"};
  for (const auto& s : g_names(c.n)) out.table.columns.push_back(s);
  for (const auto& s : h_names(c.n)) out.table.columns.push_back(s);
  out.table.columns.push_back("increment");
  const MapTable& T = b.table;
  for (std::size_t i = 0; i < T.g.size(); ++i) {
    const auto g = axis_coords(T.g[i]);
    for (std::size_t k = 0; k < T.F[i].size(); ++k) {
      std::vector<Cell> row{std::int64_t{T.n0 + static_cast<int>(k)}};
      for (double x : g) row.emplace_back(x);
      const HPoint& F = T.F[i][k];
      for (int j = 1; j <= 2 * c.n; ++j) row.emplace_back(F[j]);
      row.emplace_back(F.t);
      row.emplace_back(T.increment[i][k]);
      out.table.add(std::move(row));
    }
  }
  out.pass = b.audit.pass();
  out.summary = audit_json(b.audit);
  return out;
}

Report audit_cmd(RunConfig& c) {
  std::vector<KeptPoint> kept;
  const BuildResult b = build(c, kept);
  const BilipAudit& a = b.audit;
  Report out;
  out.table.columns = {"ratio_min", "ratio_max", "pass",        "pairs",     "increment_sum",
                       "geometric_bound", "max_radius", "L", "A", "alpha"};
  out.table.add({a.ratio_min, a.ratio_max, a.pass(), std::int64_t{a.pairs}, a.increment_sum, a.geometric_bound,
                 a.max_radius, a.L, a.A, a.alpha});
  out.pass = a.pass();
  out.summary = audit_json(a);
  return out;
}

Report flag_approx_cmd(RunConfig& c) {
  if (c.n != 1) throw UsageError("flag-approx needs group.n = 1");
  const SurfaceFn phi = make_surface(c);
  const Regularity& r = phi.declared();
  const TauSolution tau = solve_tau(phi, graph_point(phi, base_point(c)), 1.0, c.ode_step);
  const double exponent = (1.0 + r.alpha) / 2.0;
  Report out;
  out.table.columns = {"t", "error", "bound"};
  std::vector<double> ts = logspace(c.sweep_lo, c.sweep_hi, c.sweep_points), errs;
  bool within = true;
  double worst = 0.0;
  for (double t : ts) {
    const double e = finite_or_throw(flag_approx_error(phi, tau, 0.0, t), "flag approximation error");
    const double bound = r.H * std::pow(t, exponent);
    within = within && e <= c.slack * bound + c.zero;
    worst = std::max(worst, e);
    errs.push_back(e);
    out.table.add({t, e, bound});
  }
  const LineFit fit = positive_fit(ts, errs);
  out.table.add({std::string("slope"), fit.slope, exponent});
  const bool slope_ok = worst <= c.zero || fit.points < 2 || fit.slope >= exponent - c.slope_slack;
  out.pass = within && slope_ok;
  out.summary = {{"slope", fit.slope}, {"exponent", exponent}, {"within_bound", within}, {"slope_ok", slope_ok}};
  return out;
}

Report plane_approx_cmd(RunConfig& c) {
  if (c.n < 2) throw UsageError("plane-approx needs group.n >= 2");
  const SurfaceFn phi = make_surface(c);
  const Regularity& r = phi.declared();
  const WPoint w0 = base_point(c);
  Sampler rng(c.seed);
  std::vector<WPoint> dirs;
  for (int i = 0; i < std::min(c.count, 32); ++i) {
    WPoint d = rng.wbox(WPoint(c.n), 1.0, 1.0);
    if (wnorm(d) > 0.0) dirs.push_back(d);
  }
  const double exponent = 1.0 + r.alpha;
  Report out;
  out.table.columns = {"d", "error", "bound"};
  std::vector<double> ds, errs;
  bool within = true;
  double worst = 0.0;
  for (double rad : logspace(c.sweep_lo, c.sweep_hi, c.sweep_points)) {
    double d = 0.0, e = 0.0;
    for (const auto& dir : dirs) {
      const PlaneApprox a = plane_approx_error(phi, w0, wdilate(dir, rad / wnorm(dir)));
      d = std::max(d, a.d);
      e = std::max(e, finite_or_throw(a.error, "plane approximation error"));
    }
    // bound column is H d^{1+alpha}; the check allows a factor 4 in front
    const double bound = r.H * std::pow(d, exponent);
    within = within && e <= 4.0 * bound + c.zero * d * d;
    worst = std::max(worst, e);
    ds.push_back(d);
    errs.push_back(e);
    out.table.add({d, e, bound});
  }
  const LineFit fit = positive_fit(ds, errs);
  out.table.add({std::string("slope"), fit.slope, exponent});
  const bool slope_ok = worst <= c.zero || fit.points < 2 || fit.slope >= exponent - c.slope_slack;
  out.pass = within && slope_ok;
  out.summary = {{"slope", fit.slope}, {"exponent", exponent}, {"within_bound", within}, {"slope_ok", slope_ok}};
  return out;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"surface-info", "gradient",  "verify-iso",  "verify-comp",
                                                 "cantor",       "build-map", "audit",       "flag-approx",
                                                 "plane-approx", "vertical-holder"};
  return names;
}

std::unique_ptr<CorrespondenceOracle> make_oracle(const RunConfig& c, const SurfaceFn& phi) {
  if (phi.n() == 1) {
    FlagOracleOptions o;
    o.tol = c.nearest_point;
    o.ode_step = c.ode_step;
    o.range = c.ode_range;
    return std::make_unique<FlagOracle>(phi, o);
  }
  PlaneOracleOptions o;
  o.tol = c.nearest_point;
  return std::make_unique<PlaneOracle>(phi, o);
}

void resolve_scales(RunConfig& c, const CorrespondenceOracle& oracle) {
  const double eps = c.cantor_alpha / 2.0;
  auto nmax_of = [&](int n0) { return c.depth ? n0 + *c.depth : c.nmax; };
  auto tau_of = [&](int n0) {
    if (c.tau) return *c.tau;
    const DyadicGrid grid(c.n);
    const Cube root = grid.cube(grid.cube_of_point(GPoint(c.n), n0));
    return auto_tau(c.n, n0, std::max(n0, nmax_of(n0)), eps, twist_bound(c.n, root.box));
  };
  if (!c.n0) {
    c.n0 = compute_n0(oracle.declared_L(), oracle.declared_A(), oracle.declared_alpha(), tau_of);
  }
  c.nmax = nmax_of(*c.n0);
  if (c.nmax < *c.n0)
    throw UsageError("scales.nmax (" + std::to_string(c.nmax) + ") is below n0 (" + std::to_string(*c.n0) +
                     "); set scales.depth instead");
  c.tau = tau_of(*c.n0);
}

std::vector<BasePoint> make_bases(const RunConfig& c, const SurfaceFn& phi) {
  Sampler rng(c.seed);
  std::vector<BasePoint> out;
  const WPoint w0 = base_point(c);
  for (int b = 0; b < c.bases; ++b) {
    const HPoint p = graph_point(phi, rng.wbox(w0, 0.5, 0.25));
    out.push_back({rng.gball(GPoint(c.n), 0.5), p});
  }
  return out;
}

Report run_command(const std::string& command, RunConfig& c) {
  Report r;
  if (command == "surface-info")
    r = surface_info(c);
  else if (command == "gradient")
    r = gradient(c);
  else if (command == "vertical-holder")
    r = vertical_holder(c);
  else if (command == "verify-iso")
    r = verify_iso_cmd(c);
  else if (command == "verify-comp")
    r = verify_comp_cmd(c);
  else if (command == "cantor")
    r = cantor_cmd(c);
  else if (command == "build-map")
    r = build_map_cmd(c);
  else if (command == "audit")
    r = audit_cmd(c);
  else if (command == "flag-approx")
    r = flag_approx_cmd(c);
  else if (command == "plane-approx")
    r = plane_approx_cmd(c);
  else
    throw UsageError("unknown command '" + command + "'");
  r.command = command;
  return r;
}

int run(const std::string& command, const RunConfig& config, std::ostream& err) {
  RunConfig c = config;
  try {
    const Report r = run_command(command, c);
    write_report(c, config_json(c), r);
    if (!r.pass) {
      err << "heisrect: " << command << ": asserted bounds failed (see output)\n";
      return kExitViolation;
    }
    return kExitPass;
  } catch (const UsageError& e) {
    err << "heisrect: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    err << "heisrect: invariant violated: " << e.what() << "\n";
    return kExitViolation;
  } catch (const NumericalFailure& e) {
    err << "heisrect: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int cli_main(const std::vector<std::string>& args, std::ostream& err) {
  CLI::App app{"Bilipschitz pieces of intrinsic graphs in Heisenberg groups"};
  std::string command, path;
  std::vector<std::string> sets;
  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(command_names()));
  app.add_option("--config", path, "JSON configuration file")->required();
  app.add_option("--set", sets, "Override a configuration key (dotted.key=value)")->take_all();
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "heisrect: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  RunConfig config;
  try {
    config = load_config(path, sets);
  } catch (const UsageError& e) {
    err << "heisrect: configuration error: " << e.what() << "\n";
    return kExitUsage;
  }
  return run(command, config, err);
}

}  // namespace heisrect

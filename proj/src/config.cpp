#include "heisrect/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "heisrect/errors.hpp"

namespace heisrect {

namespace {

// Reads the keys of one JSON object and rejects whatever was not read.
class Section {
 public:
  Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw UsageError(where() + " must be an object");
  }

  bool has(const std::string& k) {
    seen_.insert(k);
    return j_.contains(k);
  }
  const Json& at(const std::string& k) {
    seen_.insert(k);
    return j_.at(k);
  }
  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

  double real(const std::string& k, double def) {
    if (!has(k)) return def;
    const Json& v = j_.at(k);
    if (!v.is_number()) throw UsageError(key(k) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw UsageError(key(k) + ": expected a finite number");
    return x;
  }
  std::int64_t integer(const std::string& k, std::int64_t def) {
    if (!has(k)) return def;
    const Json& v = j_.at(k);
    if (!v.is_number_integer()) throw UsageError(key(k) + ": expected an integer");
    return v.get<std::int64_t>();
  }
  std::string text(const std::string& k, const std::string& def) {
    if (!has(k)) return def;
    const Json& v = j_.at(k);
    if (!v.is_string()) throw UsageError(key(k) + ": expected a string");
    return v.get<std::string>();
  }
  bool is_auto(const std::string& k) {
    if (!has(k)) return true;
    const Json& v = j_.at(k);
    if (v.is_string()) {
      if (v.get<std::string>() != "auto") throw UsageError(key(k) + ": expected \"auto\" or a number");
      return true;
    }
    return false;
  }
  std::vector<double> reals(const std::string& k, std::vector<double> def) {
    if (!has(k)) return def;
    const Json& v = j_.at(k);
    if (!v.is_array()) throw UsageError(key(k) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw UsageError(key(k) + ": expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  Section sub(const std::string& k) {
    static const Json empty = Json::object();
    return has(k) ? Section(j_.at(k), key(k)) : Section(empty, key(k));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw UsageError("unknown key '" + key(it.key()) + "'");
  }

 private:
  std::string where() const { return path_.empty() ? "configuration" : "'" + path_ + "'"; }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void apply_override(Json& root, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + item + "'");
  const std::string key = item.substr(0, eq), text = item.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  Json* node = &root;
  std::stringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw UsageError("--set key '" + key + "' has an empty component");
    if (node->is_null()) *node = Json::object();
    if (!node->is_object()) throw UsageError("--set key '" + key + "' descends into a non-object");
    node = &(*node)[part];
  }
  *node = value;
}

int positive_int(Section& s, const std::string& k, std::int64_t def, std::int64_t lo = 1) {
  const std::int64_t v = s.integer(k, def);
  if (v < lo || v > 1000000000) throw UsageError(s.key(k) + ": out of range");
  return static_cast<int>(v);
}

double positive(Section& s, const std::string& k, double def) {
  const double v = s.real(k, def);
  if (!(v > 0.0)) throw UsageError(s.key(k) + ": must be positive");
  return v;
}

void read_surface(Section s, RunConfig& c) {
  if (!s.has("kind")) throw UsageError("missing required key 'surface.kind'");
  c.surface_kind = s.text("kind", "");
  Section p = s.sub("params");
  Json& out = c.surface_params;
  out = Json::object();
  const std::string& k = c.surface_kind;
  if (k == "constant") {
    out["c"] = p.real("c", 0.0);
  } else if (k == "bigolin-vittone") {
    out["alpha"] = p.real("alpha", 0.75);
    out["window"] = p.real("window", 2.0);
  } else if (k == "flag") {
    const FlagProfile tent = FlagProfile::tent();
    out["knots"] = p.reals("knots", tent.knots());
    out["values"] = p.reals("values", tent.values());
  } else if (k == "bump") {
    out["amplitude"] = p.real("amplitude", 0.5);
    out["radius"] = p.real("radius", 1.0);
  } else if (k == "tabulated") {
    out["y0"] = p.real("y0", -1.0);
    out["y1"] = p.real("y1", 1.0);
    out["t0"] = p.real("t0", -1.0);
    out["t1"] = p.real("t1", 1.0);
    out["ny"] = positive_int(p, "ny", 2, 2);
    out["nt"] = positive_int(p, "nt", 2, 2);
    if (!p.has("values")) throw UsageError("missing required key 'surface.params.values'");
    out["values"] = p.reals("values", {});
  } else {
    throw UsageError("surface.kind: unknown surface '" + k +
                     "' (expected constant, bigolin-vittone, flag, bump or tabulated)");
  }
  p.finish();
  if (s.has("declared")) {
    Section d = s.sub("declared");
    Regularity r;
    r.alpha = d.real("alpha", r.alpha);
    r.H = d.real("H", r.H);
    r.L = d.real("L", r.L);
    r.support_radius = d.real("support_radius", r.support_radius);
    d.finish();
    c.declared = r;
  }
  s.finish();
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw UsageError("configuration must be a JSON object");
  for (const auto& o : overrides) apply_override(root, o);

  RunConfig c;
  Section top(root, "");

  Section g = top.sub("group");
  c.n = positive_int(g, "n", 1);
  if (c.n > 8) throw UsageError("group.n: at most 8 is supported");
  g.finish();

  if (!top.has("surface")) throw UsageError("missing required key 'surface.kind'");
  read_surface(top.sub("surface"), c);

  Section sc = top.sub("scales");
  if (!sc.is_auto("n0")) c.n0 = positive_int(sc, "n0", 0, 0);
  c.nmax = positive_int(sc, "nmax", c.nmax, 0);
  if (sc.has("depth")) c.depth = positive_int(sc, "depth", 0, 0);
  if (c.n0 && !c.depth && c.nmax < *c.n0) throw UsageError("scales.nmax must be at least scales.n0");
  sc.finish();

  Section ca = top.sub("cantor");
  c.cantor_alpha = ca.real("alpha", c.cantor_alpha);
  if (!(c.cantor_alpha > 0.0 && c.cantor_alpha <= 1.0)) throw UsageError("cantor.alpha must lie in (0, 1]");
  if (!ca.is_auto("tau")) {
    c.tau = ca.real("tau", 0.0);
    if (!(*c.tau >= 0.0)) throw UsageError("cantor.tau must be non-negative");
  }
  ca.finish();

  Section sa = top.sub("sampling");
  c.count = positive_int(sa, "count", c.count);
  const std::int64_t seed = sa.integer("seed", 1);
  if (seed < 0) throw UsageError("sampling.seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.bases = positive_int(sa, "bases", c.bases);
  c.pairs = positive_int(sa, "pairs", c.pairs);
  sa.finish();

  Section t = top.sub("tolerances");
  c.nearest_point = positive(t, "nearest_point", c.nearest_point);
  c.zero = positive(t, "zero", c.zero);
  c.slack = positive(t, "slack", c.slack);
  c.slope_slack = t.real("slope_slack", c.slope_slack);
  if (!(c.slope_slack >= 0.0)) throw UsageError("tolerances.slope_slack must be non-negative");
  t.finish();

  Section od = top.sub("ode");
  c.ode_step = positive(od, "step", c.ode_step);
  c.ode_range = positive(od, "range", c.ode_range);
  od.finish();

  Section sw = top.sub("sweep");
  c.sweep_lo = positive(sw, "lo", c.sweep_lo);
  c.sweep_hi = positive(sw, "hi", c.sweep_hi);
  if (!(c.sweep_hi > c.sweep_lo)) throw UsageError("sweep.hi must exceed sweep.lo");
  c.sweep_points = positive_int(sw, "points", c.sweep_points, 2);
  c.base = sw.reals("base", {});
  if (!c.base.empty() && static_cast<int>(c.base.size()) != 2 * c.n)
    throw UsageError("sweep.base needs 2n entries (x_2..x_2n, t)");
  sw.finish();

  Section out = top.sub("output");
  c.output_path = out.text("path", c.output_path);
  c.format = out.text("format", c.format);
  if (c.format != "csv" && c.format != "json") throw UsageError("output.format must be csv or json");
  out.finish();

  top.finish();
  return c;
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read configuration file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

Json config_json(const RunConfig& c) {
  Json j;
  j["group"]["n"] = c.n;
  j["surface"]["kind"] = c.surface_kind;
  j["surface"]["params"] = c.surface_params;
  if (c.declared) {
    const Regularity& r = *c.declared;
    j["surface"]["declared"] = {{"alpha", r.alpha}, {"H", r.H}, {"L", r.L}, {"support_radius", r.support_radius}};
  }
  j["scales"]["n0"] = c.n0 ? Json(*c.n0) : Json("auto");
  j["scales"]["nmax"] = c.nmax;
  if (c.depth) j["scales"]["depth"] = *c.depth;
  j["cantor"]["alpha"] = c.cantor_alpha;
  j["cantor"]["tau"] = c.tau ? Json(*c.tau) : Json("auto");
  j["sampling"] = {{"count", c.count}, {"seed", c.seed}, {"bases", c.bases}, {"pairs", c.pairs}};
  j["tolerances"] = {
      {"nearest_point", c.nearest_point}, {"zero", c.zero}, {"slack", c.slack}, {"slope_slack", c.slope_slack}};
  j["ode"] = {{"step", c.ode_step}, {"range", c.ode_range}};
  j["sweep"] = {{"lo", c.sweep_lo}, {"hi", c.sweep_hi}, {"points", c.sweep_points}, {"base", c.base}};
  j["output"] = {{"path", c.output_path}, {"format", c.format}};
  return j;
}

SurfaceFn make_surface(const RunConfig& c) {
  const Json& p = c.surface_params;
  const std::string& k = c.surface_kind;
  SurfaceFn s = SurfaceFn::constant(c.n, 0.0);
  if (k == "constant") {
    s = SurfaceFn::constant(c.n, p["c"].get<double>());
  } else if (k == "bigolin-vittone") {
    s = SurfaceFn::bigolin_vittone(c.n, p["alpha"].get<double>(), p["window"].get<double>());
  } else if (k == "flag") {
    s = SurfaceFn::flag(c.n, FlagProfile(p["knots"].get<std::vector<double>>(), p["values"].get<std::vector<double>>()));
  } else if (k == "bump") {
    s = SurfaceFn::bump(c.n, p["amplitude"].get<double>(), p["radius"].get<double>());
  } else if (k == "tabulated") {
    if (c.n != 1) throw UsageError("tabulated surfaces need group.n = 1");
    TabulatedGrid g;
    g.y0 = p["y0"].get<double>();
    g.y1 = p["y1"].get<double>();
    g.t0 = p["t0"].get<double>();
    g.t1 = p["t1"].get<double>();
    g.ny = p["ny"].get<int>();
    g.nt = p["nt"].get<int>();
    g.values = p["values"].get<std::vector<double>>();
    s = SurfaceFn::tabulated(std::move(g), c.declared.value_or(Regularity{}));
  } else {
    throw UsageError("unknown surface kind '" + k + "'");
  }
  return c.declared ? s.with_declared(*c.declared) : s;
}

WPoint base_point(const RunConfig& c) {
  WPoint w(c.n);
  if (c.base.empty()) return w;
  for (int i = 0; i < 2 * c.n - 1; ++i) w.y[i] = c.base[static_cast<std::size_t>(i)];
  w.t = c.base.back();
  return w;
}

}  // namespace heisrect

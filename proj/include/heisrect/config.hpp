#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "heisrect/surface.hpp"

namespace heisrect {

using Json = nlohmann::ordered_json;

// Resolved run configuration.  Optional fields left empty mean "auto".
struct RunConfig {
  int n = 1;

  std::string surface_kind;
  Json surface_params = Json::object();  // completed with every default
  std::optional<Regularity> declared;     // overrides the surface's own

  std::optional<int> n0;
  int nmax = 8;
  std::optional<int> depth;  // when set, nmax = n0 + depth

  double cantor_alpha = 0.5;
  std::optional<double> tau;

  int count = 200;
  std::uint64_t seed = 1;
  int bases = 4;
  int pairs = 1000;

  double nearest_point = 1e-9;
  double zero = 1e-7;
  double slack = 1.1;
  double slope_slack = 0.05;

  double ode_step = 1.0 / 64;
  double ode_range = 8.0;

  double sweep_lo = 1e-4;
  double sweep_hi = 1e-1;
  int sweep_points = 13;
  std::vector<double> base;  // W coordinates x_2..x_2n, t; empty means the origin

  std::string output_path = "-";
  std::string format = "csv";
};

// Parses text, applies key=value overrides (dotted keys, JSON or bare string
// values) and validates against the strict schema.  Throws UsageError.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

// Every field, with "auto" for unresolved optionals.
Json config_json(const RunConfig& c);

SurfaceFn make_surface(const RunConfig& c);
WPoint base_point(const RunConfig& c);

}  // namespace heisrect

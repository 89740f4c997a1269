#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "heisrect/config.hpp"

namespace heisrect {

inline constexpr const char* kSchemaVersion = "heisrect/1";

// Shortest decimal that reads back to the same double.
std::string format_number(double x);
// RFC 4180 field quoting.
std::string csv_field(const std::string& s);

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

std::string cell_text(const Cell& c);

// A command's result: a table plus a free-form summary.
struct Report {
  std::string command;
  Table table;
  Json summary = Json::object();
  bool pass = true;
};

// Header lines, then the body.  The CSV body is the column line and the rows.
void write_csv(std::ostream& out, const Json& config, const Report& r);
void write_json(std::ostream& out, const Json& config, const Report& r);
// Writes to config.output_path ("-" for stdout) in config.format.
void write_report(const RunConfig& config, const Json& resolved, const Report& r);

}  // namespace heisrect

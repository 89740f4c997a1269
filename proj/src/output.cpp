#include "heisrect/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "heisrect/errors.hpp"

namespace heisrect {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw std::logic_error("table row width does not match its columns");
  rows.push_back(std::move(row));
}

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool x) const { return x ? "true" : "false"; }
    std::string operator()(const std::string& x) const { return x; }
  } v;
  return std::visit(v, c);
}

namespace {

Json cell_json(const Cell& c) {
  if (const double* x = std::get_if<double>(&c)) {
    if (std::isfinite(*x)) return *x;
    return format_number(*x);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const bool* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& out, const Json& config, const Report& r) {
  out << "# schema: " << kSchemaVersion << "\n";
  out << "# command: " << r.command << "\n";
  out << "# config: " << config.dump() << "\n";
  for (std::size_t i = 0; i < r.table.columns.size(); ++i)
    out << (i ? "," : "") << csv_field(r.table.columns[i]);
  out << "\r\n";
  for (const auto& row : r.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
    out << "\r\n";
  }
}

void write_json(std::ostream& out, const Json& config, const Report& r) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["command"] = r.command;
  j["config"] = config;
  j["pass"] = r.pass;
  j["columns"] = r.table.columns;
  j["rows"] = Json::array();
  for (const auto& row : r.table.rows) {
    Json a = Json::array();
    for (const auto& c : row) a.push_back(cell_json(c));
    j["rows"].push_back(std::move(a));
  }
  j["summary"] = r.summary;
  out << j.dump(2) << "\n";
}

void write_report(const RunConfig& config, const Json& resolved, const Report& r) {
  auto emit = [&](std::ostream& o) {
    if (config.format == "json")
      write_json(o, resolved, r);
    else
      write_csv(o, resolved, r);
  };
  if (config.output_path == "-") {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(config.output_path, std::ios::binary);
  if (!f) throw UsageError("cannot write output file '" + config.output_path + "'");
  emit(f);
  if (!f) throw UsageError("failed while writing '" + config.output_path + "'");
}

}  // namespace heisrect

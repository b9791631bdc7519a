#include "cli/output.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "fraxonium/format.hpp"

namespace fraxonium::cli {

namespace {

std::string cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string out;
    for (const auto& e : v) out += (out.empty() ? "" : ";") + cell(e);
    return out;
  }
  return v.dump();
}

}  // namespace

Json number(double value) { return Json(round_significant(value)); }

std::string render_csv(const Report& report) {
  std::ostringstream os;
  os << "# command=" << report.command << '\n';
  for (const auto& [k, v] : report.config) os << "# " << k << '=' << cell(v) << '\n';
  for (const auto& [k, v] : report.summary) os << "# " << k << '=' << cell(v) << '\n';
  for (std::size_t i = 0; i < report.columns.size(); ++i) {
    os << (i ? "," : "") << report.columns[i];
  }
  os << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string render_json(const Report& report) {
  Json doc;
  doc["command"] = report.command;
  doc["config"] = Json::object();
  for (const auto& [k, v] : report.config) doc["config"][k] = v;
  doc["summary"] = Json::object();
  for (const auto& [k, v] : report.summary) doc["summary"][k] = v;
  doc["columns"] = report.columns;
  doc["rows"] = Json::array();
  for (const auto& row : report.rows) doc["rows"].push_back(row);
  return doc.dump(2) + "\n";
}

void emit(const Report& report, Format format, const std::string& path) {
  const std::string text = format == Format::Csv ? render_csv(report) : render_json(report);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

}  // namespace fraxonium::cli

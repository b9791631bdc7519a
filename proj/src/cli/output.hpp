#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

namespace fraxonium::cli {

using Json = nlohmann::ordered_json;

enum class Format { Csv, Json };

// One run's output: resolved configuration, a data table and scalar results.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, Json>> config;
  std::vector<std::pair<std::string, Json>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  void set(const std::string& key, Json value) { config.emplace_back(key, std::move(value)); }
  void result(const std::string& key, Json value) { summary.emplace_back(key, std::move(value)); }
};

// Doubles are rounded to 12 significant digits before they enter a report.
Json number(double value);

// CSV: "# key=value" metadata lines (config then summary), header, rows.
std::string render_csv(const Report& report);
std::string render_json(const Report& report);

// Writes to `path`, or stdout for "-". Throws std::runtime_error on I/O failure.
void emit(const Report& report, Format format, const std::string& path);

}  // namespace fraxonium::cli

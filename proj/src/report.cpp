#include "tapa/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tapa/errors.hpp"

namespace tapa {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns)
    : n_cols_(columns.size()) {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) body_ += ',';
    body_ += columns[i];
  }
  body_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != n_cols_) throw ConfigError("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
}

void CsvWriter::numeric_row(const std::vector<double>& cells) {
  std::vector<std::string> text;
  text.reserve(cells.size());
  for (double v : cells) text.push_back(format_g17(v));
  row(text);
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string checks_to_json(const std::string& command, std::uint64_t seed,
                           const std::vector<TheoryCheckReport>& checks,
                           const std::vector<std::string>& skipped) {
  nlohmann::ordered_json root;
  root["command"] = command;
  root["seed"] = seed;
  bool all = true;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    nlohmann::ordered_json params;
    for (const auto& p : c.params) params[p.name] = p.value;
    jc["params"] = params;
    jc["lhs"] = c.lhs;
    jc["rhs"] = c.rhs;
    jc["margin"] = c.margin;
    jc["pass"] = c.pass;
    arr.push_back(jc);
    all = all && c.pass;
  }
  root["pass"] = all;
  root["checks"] = arr;
  root["skipped"] = skipped;
  return root.dump(2) + "\n";
}

std::string checks_to_csv(const std::vector<TheoryCheckReport>& checks) {
  CsvWriter csv({"name", "lhs", "rhs", "margin", "pass", "params"});
  for (const auto& c : checks) {
    std::string packed;
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      if (i) packed += ';';
      packed += c.params[i].name + "=" + format_g17(c.params[i].value);
    }
    csv.row({c.name, format_g17(c.lhs), format_g17(c.rhs), format_g17(c.margin),
             c.pass ? "1" : "0", packed});
  }
  return csv.str();
}

}  // namespace tapa

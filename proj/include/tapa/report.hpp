#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tapa/theory.hpp"

namespace tapa {

/// Doubles are serialized with 17 significant digits so every CSV field
/// round-trips bit-exactly.
std::string format_g17(double v);

/// Minimal CSV builder: header row plus g17-formatted numeric cells.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns);

  void row(const std::vector<std::string>& cells);
  void numeric_row(const std::vector<double>& cells);

  const std::string& str() const { return body_; }

 private:
  std::size_t n_cols_;
  std::string body_;
};

/// Binary-mode write; byte content is exactly `content`.
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

/// JSON text for a list of check reports plus run metadata. Key order is
/// fixed, so equal inputs serialize to equal bytes.
std::string checks_to_json(const std::string& command, std::uint64_t seed,
                           const std::vector<TheoryCheckReport>& checks,
                           const std::vector<std::string>& skipped);

/// checks.csv content: name, lhs, rhs, margin, pass, params (packed k=v;...).
std::string checks_to_csv(const std::vector<TheoryCheckReport>& checks);

}  // namespace tapa

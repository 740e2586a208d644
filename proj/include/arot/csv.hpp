#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace arot {

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Minimal reader for the comma-separated, header-first files this project
// consumes and emits. Handles double-quoted fields; no embedded newlines.
class CsvTable {
 public:
  static CsvTable read_file(const std::string& path);
  static CsvTable from_string(const std::string& text);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t row_count() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_[i]; }

  // Fatal (CsvError) if the column is absent, per the ingest contract.
  std::size_t column(const std::string& name) const;
  std::optional<std::size_t> find_column(const std::string& name) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_quote(const std::string& field);

// Fixed-format float rendering so output files are byte-stable across runs.
std::string format_double(double v, int decimals);

}  // namespace arot

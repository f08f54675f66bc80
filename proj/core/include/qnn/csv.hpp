#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace qnn::csv {

/// Formats a double with 12 significant digits (the report precision used everywhere).
std::string format_double(double v);

/// Simple row/column table serialized as CSV (values are written verbatim).
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  std::size_t row_count() const { return rows_.size(); }
  std::string to_string() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes content to path via a temporary file in the same directory plus rename,
/// so a failed run never leaves a partial output file behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Splits a CSV file into rows of cells. No quoting support; cells are trimmed of
/// surrounding whitespace and carriage returns. Empty lines are skipped.
std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path);

}  // namespace qnn::csv

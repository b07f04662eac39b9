#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fup {

inline constexpr const char* kToolVersion = "1.0.0";

using Cell = std::variant<std::int64_t, double, std::string>;

/// Tabular output. Doubles are written with 17 significant digits so a
/// rerun with the same configuration produces the same bytes.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> meta;
  bool truncated = false;

  ResultTable() = default;
  explicit ResultTable(std::vector<std::string> cols) : columns(std::move(cols)) {}

  void add_row(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
  void sort_by(const std::vector<std::string>& keys);

  /// CSV with one `#` provenance line carrying tool version and config hash.
  std::string to_csv(const std::string& config_hash) const;
};

std::string format_double(double x);
std::string format_cell(const Cell& c);

/// 64-bit FNV-1a of a canonical configuration string, as 16 hex digits.
std::string config_hash(const std::string& canonical);

/// Writes `content` to `path + ".partial"` and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace fup

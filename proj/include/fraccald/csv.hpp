#pragma once

#include "fraccald/grid.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace fraccald {

using CsvCell = std::variant<double, long long, std::string>;

/// Reals in scientific notation with 17 significant digits (round-trip exact).
std::string format_real(double x);

/// Comma-separated table with a header row. Rows must match the header width.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::filesystem::path path_;
  std::size_t width_;
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Position of a header column; throws ConfigError naming the column if absent.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/**
 * Field from a CSV file with one value per grid point in lexicographic order.
 * A header row is allowed; with several columns the one named "value" is used.
 */
Field read_field_csv(const std::filesystem::path& path, const Grid& grid);
void write_field_csv(const std::filesystem::path& path, const std::vector<std::pair<std::string, const Field*>>& columns);

}  // namespace fraccald

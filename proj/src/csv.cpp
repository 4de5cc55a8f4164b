#include "fraccald/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace fraccald {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

bool parse_real(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), width_(header.size()) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path);
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  if (cells.size() != width_) throw std::logic_error("CSV row width does not match header of " + path_.string());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [this](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_real(v);
          } else {
            out_ << v;
          }
        },
        cells[i]);
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed for " + path_.string());
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("CSV table has no column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file " + path.string());
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    if (first) {
      first = false;
      double probe = 0.0;
      if (!parse_real(cells.front(), probe)) {
        t.header = std::move(cells);
        continue;
      }
    }
    t.rows.push_back(std::move(cells));
  }
  return t;
}

Field read_field_csv(const std::filesystem::path& path, const Grid& grid) {
  const CsvTable t = read_csv(path);
  std::size_t col = 0;
  if (!t.header.empty() && t.header.size() > 1) col = t.column("value");
  if (static_cast<Index>(t.rows.size()) != grid.size()) {
    throw ConfigError(path.string() + ": expected " + std::to_string(grid.size()) + " values, found " +
                      std::to_string(t.rows.size()));
  }
  Vector v(grid.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    double x = 0.0;
    if (col >= row.size() || !parse_real(row[col], x)) {
      throw ConfigError(path.string() + ":" + std::to_string(r + 1 + (t.header.empty() ? 0 : 1)) +
                        ": not a number");
    }
    v[static_cast<Index>(r)] = x;
  }
  return Field(grid, std::move(v));
}

void write_field_csv(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, const Field*>>& columns) {
  if (columns.empty()) throw std::logic_error("no field columns to write");
  const Grid& g = columns.front().second->grid();
  std::vector<std::string> header{"index", "x"};
  if (g.dim() == 2) header.push_back("y");
  for (const auto& c : columns) header.push_back(c.first);
  CsvWriter out(path, header);
  for (Index i = 0; i < g.size(); ++i) {
    const Point p = g.coordinate(i);
    std::vector<CsvCell> row{static_cast<long long>(i), p[0]};
    if (g.dim() == 2) row.emplace_back(p[1]);
    for (const auto& c : columns) row.emplace_back((*c.second)[i]);
    out.row(row);
  }
}

}  // namespace fraccald

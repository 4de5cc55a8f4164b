#pragma once

#include "fraccald/families.hpp"
#include "fraccald/fracops.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fraccald {

inline constexpr const char* kConfigSchema = "fraccald/1";

/// Interior predicate built from named primitives.
struct ShapeSpec {
  std::string kind;  // interval, rectangle, ball, union
  Point lo = Point::Zero();
  Point hi = Point::Zero();
  Point center = Point::Zero();
  double radius = 0.0;
  std::vector<ShapeSpec> parts;

  bool contains(const Point& p, int dim) const;
};

/**
 * Scenario-specific parameters. Lookups report the source file, line and full
 * field path on failure.
 */
class ParamTable {
 public:
  ParamTable() = default;
  ParamTable(YAML::Node node, std::string source, std::string prefix);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number_or(const std::string& key, double fallback) const;
  long long integer_or(const std::string& key, long long fallback) const;
  bool flag_or(const std::string& key, bool fallback) const;
  std::string text_or(const std::string& key, const std::string& fallback) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<double> numbers_or(const std::string& key, std::vector<double> fallback) const;
  std::vector<std::vector<double>> rows(const std::string& key) const;
  ShapeSpec shape(const std::string& key) const;
  FamilySpec family(const std::string& key) const;
  /// Named shapes under a mapping (e.g. a list of domains keyed by id).
  std::map<std::string, ShapeSpec> shapes(const std::string& key) const;

 private:
  YAML::Node child(const std::string& key) const;
  std::string where(const YAML::Node& n) const;

  YAML::Node node_;
  std::string source_;
  std::string prefix_;
};

struct GridSpec {
  int dim = 1;
  double extent = 1.0;
  Index points = 8;
};

struct ScenarioConfig {
  std::filesystem::path source;
  std::string scenario;
  std::uint64_t seed = 0;
  std::string output;  // subdirectory of the output root; defaults to the scenario name
  GridSpec grid;
  std::optional<ShapeSpec> domain;
  std::map<std::string, ShapeSpec> windows;
  std::optional<double> s;
  Flavor flavor = Flavor::kernel;
  std::optional<FamilySpec> potential;
  std::optional<FamilySpec> conductivity;
  ParamTable params;

  Grid make_grid() const;
  /// Interior from `domain`, windows from `windows`.
  DomainMask make_mask() const;
  DomainMask make_mask(const Grid& grid) const;
  double order() const;
};

/// Parses and validates a configuration. Errors are ConfigError with file:line diagnostics.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace fraccald

#pragma once

#include "fraccald/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace fraccald {

struct ScenarioInfo {
  std::string name;
  std::string description;
  std::vector<std::string> required;  // config field paths beyond grid/schema/scenario
};

/// All scenarios in their stable listing order.
const std::vector<ScenarioInfo>& scenario_catalog();
const ScenarioInfo* find_scenario(const std::string& name);

struct Assertion {
  std::string name;
  double value;
  double threshold;
  std::string relation;  // "<=", ">=", "<", ">", "=="
  bool pass;
};

struct ScenarioResult {
  std::string scenario;
  bool pass = true;
  std::vector<Assertion> assertions;
  nlohmann::json metrics = nlohmann::json::object();
};

/**
 * Runs a scenario and writes manifest.json plus its CSV tables to out_dir.
 * Throws ConfigError for invalid parameters and ResourceLimitError when the
 * requested grid exceeds the dense caps.
 */
ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

}  // namespace fraccald

// Experiment runner: parses scenario configs, runs them and writes manifests.

#include "fraccald/scenarios.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <future>
#include <iostream>
#include <mutex>

namespace {

enum Exit { kPass = 0, kAssertion = 1, kConfig = 2, kResource = 3 };

std::filesystem::path output_root() {
  const char* env = std::getenv("FRACCALD_OUTPUT_ROOT");
  return env && *env ? std::filesystem::path(env) : std::filesystem::path("results");
}

std::string valid_names() {
  std::string out;
  for (const auto& s : fraccald::scenario_catalog()) out += (out.empty() ? "" : ", ") + s.name;
  return out;
}

std::mutex g_log;

int run_one(const std::string& path) {
  auto report = [&](const std::string& msg) {
    std::lock_guard<std::mutex> lock(g_log);
    std::cerr << msg << '\n';
  };
  try {
    const fraccald::ScenarioConfig cfg = fraccald::load_config(path);
    const auto dir = output_root() / cfg.output;
    const fraccald::ScenarioResult res = fraccald::run_scenario(cfg, dir);
    std::lock_guard<std::mutex> lock(g_log);
    for (const auto& a : res.assertions) {
      std::cout << cfg.scenario << ": " << (a.pass ? "ok   " : "FAIL ") << a.name << " = " << a.value << ' '
                << a.relation << ' ' << a.threshold << '\n';
    }
    std::cout << cfg.scenario << ": " << (res.pass ? "PASS" : "FAIL") << " (" << dir.string() << ")\n";
    return res.pass ? kPass : kAssertion;
  } catch (const fraccald::ConfigError& e) {
    report("config error: " + std::string(e.what()) +
           (std::string(e.what()).find("unknown scenario") != std::string::npos ? "\nvalid scenarios: " + valid_names()
                                                                                 : ""));
    return kConfig;
  } catch (const fraccald::ResourceLimitError& e) {
    report("resource limit: " + std::string(e.what()));
    return kResource;
  } catch (const fraccald::DomainError& e) {
    report("config error: " + std::string(e.what()));
    return kConfig;
  } catch (const std::exception& e) {
    report(path + ": " + e.what());
    return kAssertion;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional exterior-value and Calderon experiment runner"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "Run one or more scenario configs (output root: $FRACCALD_OUTPUT_ROOT)");
  run->add_option("config", configs, "YAML scenario config files")->required();
  run->add_option("-j,--jobs", jobs, "Run independent configs in parallel")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list", "List scenarios");

  std::string name;
  auto* describe = app.add_subcommand("describe", "Describe a scenario and its required config fields");
  describe->add_option("scenario", name)->required();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const auto& s : fraccald::scenario_catalog()) std::cout << s.name << "  " << s.description << '\n';
    return kPass;
  }
  if (describe->parsed()) {
    const auto* info = fraccald::find_scenario(name);
    if (!info) {
      std::cerr << "unknown scenario '" << name << "'\nvalid scenarios: " << valid_names() << '\n';
      return kConfig;
    }
    std::cout << info->name << ": " << info->description << "\nrequired fields: grid";
    for (const auto& f : info->required) std::cout << ", " << f;
    std::cout << '\n';
    return kPass;
  }

  int status = kPass;
  if (jobs <= 1) {
    for (const auto& c : configs) status = std::max(status, run_one(c));
    return status;
  }
  std::size_t next = 0;
  while (next < configs.size()) {
    std::vector<std::future<int>> batch;
    for (unsigned j = 0; j < jobs && next < configs.size(); ++j, ++next) {
      batch.push_back(std::async(std::launch::async, run_one, configs[next]));
    }
    for (auto& f : batch) status = std::max(status, f.get());
  }
  return status;
}

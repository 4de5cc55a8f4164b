// Acceptance run: executes the scenarios behind each criterion and re-checks
// the recorded values against the criterion tolerances (not the config ones).

#include "fraccald/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

using namespace fraccald;

namespace {

const std::map<std::string, std::string> kConfigs = {
    {"poincare_1d", R"(schema: fraccald/1
scenario: poincare_sweep
seed: 1
grid: {dim: 1, extent: 12.566370614359172, points: 512}
domain: {shape: interval, lo: 0.0, hi: 3.141592653589793}
params:
  domain_id: unit_pi
  pairs: [[0, 1], [0, 0.5], [0.5, 0.5]]
  expect: [[0, 1, 1.0, 0.02]]
  eigen_orders: [0.25, 0.5, 0.75, 1.5]
  motion_pair: [0, 0.5]
  shift_cells: 7
)"},
    {"poincare_2d", R"(schema: fraccald/1
scenario: poincare_sweep
seed: 1
grid: {dim: 2, extent: 8.0, points: 32}
domain: {shape: rectangle, lo: [-1.0, -0.5], hi: [1.5, 0.75]}
params:
  domain_id: rectangle
  pairs: [[0.25, 0.75]]
  eigen_orders: [0.25, 0.5, 0.75, 1.5]
  eigen_grid: [6.283185307179586, 16]
  motion_pair: [0.25, 0.75]
  shift_cells: 3
)"},
    {"interpolation", R"(schema: fraccald/1
scenario: interpolation_check
seed: 1
grid: {dim: 1, extent: 8.0, points: 256}
params:
  tol: 1.0e-3
  domains:
    unit_pi: {shape: interval, lo: 0.0, hi: 3.141592653589793}
    centered: {shape: interval, lo: -1.0, hi: 1.0}
  tuples:
    - [0, 1, 1, 2]
    - [0, 0.5, 1, 1.5]
    - [0, 0.5, 0.5, 1]
    - [0, 1, 0.5, 1]
    - [0.25, 0.75, 1, 1.5]
    - [0, 1, 0.5, 1.5]
    - [0, 0.5, 0.75, 1]
)"},
    {"cylinder", R"(schema: fraccald/1
scenario: cylinder_limit
seed: 1
grid: {dim: 2, extent: 16.0, points: 64}
operator: {s: 0.5, flavor: spectral}
params:
  section: [0.0, 1.0]
  elongations: [1, 2, 4, 8]
  max_gap: 0.05
)"},
    {"alessandrini", R"(schema: fraccald/1
scenario: alessandrini_suite
seed: 7
grid: {dim: 1, extent: 8.0, points: 64}
domain: {shape: interval, lo: -1.0, hi: 1.0}
windows:
  W1: {shape: interval, lo: 1.5, hi: 3.0}
  W2: {shape: interval, lo: -3.0, hi: -1.5}
operator: {s: 0.75}
params:
  wellposed_trials: 20
  alessandrini_trials: 50
  drift: 0.3
  bump_radius: 0.5
  bump_height: 0.5
)"},
    {"liouville", R"(schema: fraccald/1
scenario: liouville_suite
seed: 11
grid: {dim: 1, extent: 8.0, points: 64}
domain: {shape: interval, lo: -1.0, hi: 1.0}
windows:
  W1: {shape: interval, lo: 1.5, hi: 3.0}
  W2: {shape: interval, lo: -3.0, hi: -1.5}
operator: {s: 0.4, flavor: kernel}
conductivity: {family: bump, center: 0.0, radius: 0.8, height: 0.5, baseline: 1.0}
params:
  pairing_trials: 100
  identity_trials: 100
  consistency_extent: 16.0
  consistency_s: 0.6
  consistency_points: [64, 128, 256]
  consistency_oracle_points: 1024
)"},
    {"nonuniqueness", R"(schema: fraccald/1
scenario: nonuniqueness_demo
seed: 1
grid: {dim: 1, extent: 16.0, points: 64}
domain: {shape: interval, lo: -1.0, hi: 1.0}
windows:
  W1: {shape: interval, lo: 2.0, hi: 3.0}
  W2: {shape: interval, lo: -3.0, hi: -2.0}
operator: {s: 0.4, flavor: kernel}
conductivity: {family: bump, center: 0.0, radius: 0.8, height: 0.3, baseline: 1.0}
params:
  m0: {family: bump, center: 4.5, radius: 1.0, height: 0.2}
)"},
    {"reconstruction", R"(schema: fraccald/1
scenario: reconstruction_demo
seed: 1
grid: {dim: 1, extent: 32.0, points: 128}
domain: {shape: interval, lo: -1.0, hi: 1.0}
operator: {s: 0.4, flavor: kernel}
conductivity: {family: bump, center: 0.0, radius: 0.8, height: 0.3, baseline: 1.0}
params:
  max_error: 1.0e-6
  noise_levels: [1.0e-8]
)"},
    {"runge", R"(schema: fraccald/1
scenario: runge_decay
seed: 1
grid: {dim: 1, extent: 8.0, points: 128}
domain: {shape: interval, lo: -1.0, hi: 1.0}
operator: {s: 0.5, flavor: spectral}
potential: {family: constant, value: 0.01}
params:
  target: {family: hat, center: 0.0, radius: 0.9, height: 1.0}
  max_residual: 0.1
)"},
};

std::map<std::string, ScenarioResult> g_results;
std::map<std::string, std::string> g_errors;

void run_all() {
  const auto root = std::filesystem::temp_directory_path() / "fraccald_acceptance";
  for (const auto& [key, text] : kConfigs) {
    try {
      g_results.emplace(key, run_scenario(parse_config(text, "acceptance:" + key), root / key));
    } catch (const std::exception& e) {
      g_errors.emplace(key, e.what());
    }
  }
  std::filesystem::remove_all(root);
}

/// Values of assertions in run `key` whose name starts with `prefix` and ends with `suffix`.
std::vector<double> values(const std::string& key, const std::string& prefix, const std::string& suffix = "") {
  if (g_errors.count(key)) throw std::runtime_error(key + ": " + g_errors.at(key));
  std::vector<double> out;
  for (const auto& a : g_results.at(key).assertions) {
    const auto& n = a.name;
    if (n.rfind(prefix, 0) == 0 && n.size() >= suffix.size() && n.compare(n.size() - suffix.size(), suffix.size(), suffix) == 0) {
      out.push_back(a.value);
    }
  }
  if (out.empty()) throw std::runtime_error(key + ": no assertion matching " + prefix + "*" + suffix);
  return out;
}

double one(const std::string& key, const std::string& name) { return values(key, name, "").front(); }

double worst(const std::vector<double>& v) {
  double m = -INFINITY;
  for (double x : v) m = std::isnan(x) ? INFINITY : std::max(m, x);
  return m;
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

using Criterion = std::function<Outcome()>;

const std::vector<std::pair<std::string, Criterion>> kCriteria = {
    {"spectral eigenrelation", [] {
       const double e = std::max(one("poincare_1d", "plane_wave_eigenrelation.max_relative_error"),
                                 one("poincare_2d", "plane_wave_eigenrelation.max_relative_error"));
       return Outcome{e <= 1e-12, fmt("max relative error %.3g (<= 1e-12)", e)};
     }},
    {"kernel/spectral consistency", [] {
       const double d = one("liouville", "kernel_spectral_consistency.max_step_change");
       const auto& m = g_results.at("liouville").metrics;
       std::ostringstream os;
       os << "discrepancies " << m.value("consistency_errors", nlohmann::json::array()).dump() << ", largest step " << d;
       return Outcome{d < 0.0, os.str()};
     }},
    {"pairing equals operator inner product", [] {
       const double e = one("liouville", "pairing_identity.max_relative_gap");
       return Outcome{e <= 1e-12, fmt("max relative gap %.3g over 100 pairs (<= 1e-12)", e)};
     }},
    {"well-posedness", [] {
       const double r = worst(values("alessandrini", "wellposed.", ".max_residual"));
       const double u = worst(values("alessandrini", "wellposed.", ".interior_modification_change"));
       return Outcome{r <= 1e-9 && u == 0.0, fmt("max residual %.3g (<= 1e-9), interior modification change %.3g (== 0)", r, u)};
     }},
    {"Alessandrini identity", [] {
       const double e = one("alessandrini", "alessandrini.max_relative_gap");
       return Outcome{e <= 1e-9, fmt("max |lhs-rhs|/(1+|lhs|) %.3g over 50 instances (<= 1e-9)", e)};
     }},
    {"DN adjoint identity", [] {
       const double e = one("alessandrini", "dn_adjoint.relative_gap");
       return Outcome{e <= 1e-10, fmt("relative gap %.3g (<= 1e-10)", e)};
     }},
    {"interior determination closed loop", [] {
       const double d = one("alessandrini", "interior_determination.different_potentials_gap");
       const double s = one("alessandrini", "interior_determination.equal_potentials_gap");
       return Outcome{d >= 1e-6 && s <= 1e-11, fmt("different %.3g (>= 1e-6), equal %.3g (<= 1e-11)", d, s)};
     }},
    {"Poincare interpolation", [] {
       const auto r = values("interpolation", "", ".ratio");
       const auto& m = g_results.at("interpolation").metrics;
       const double n = m.value("tuples_checked", 0.0);
       const bool two = !values("interpolation", "unit_pi.", ".ratio").empty() && !values("interpolation", "centered.", ".ratio").empty();
       const double w = worst(r);
       return Outcome{w <= 1.0 + 1e-3 && n >= 12 && two, fmt("max ratio %.4f (<= 1.001) over %g tuples on 2 domains", w, n)};
     }},
    {"classical anchor", [] {
       const double e = one("poincare_1d", "expect(0,1).relative_error");
       return Outcome{e <= 0.02, fmt("C(0,1) on (0,pi) relative error %.3g (<= 0.02)", e)};
     }},
    {"cylinder limit", [] {
       const double g = one("cylinder", "relative_gap_at_largest_elongation");
       const double d = one("cylinder", "elongation_monotonicity.max_drop");
       return Outcome{g < 0.05 && d <= 1e-8, fmt("gap at elongation 8 %.3g (< 0.05), monotonicity violation %.3g (<= 1e-8)", g, d)};
     }},
    {"rigid-motion invariance", [] {
       auto v = values("poincare_1d", "rigid_motion.");
       const auto v2 = values("poincare_2d", "rigid_motion.");
       v.insert(v.end(), v2.begin(), v2.end());
       const bool swap = !values("poincare_2d", "rigid_motion.axis_swap").empty();
       const double w = worst(v);
       return Outcome{w <= 1e-10 && swap, fmt("max relative difference %.3g over %g motions (<= 1e-10)", w, static_cast<double>(v.size()))};
     }},
    {"discrete Liouville identity", [] {
       const double e = one("liouville", "liouville_identity.max_gap");
       return Outcome{e <= 1e-11, fmt("max gap %.3g over 100 triples (<= 1e-11)", e)};
     }},
    {"solution correspondence", [] {
       const double e = one("liouville", "solution_correspondence.max_difference");
       return Outcome{e <= 1e-9, fmt("max difference %.3g (<= 1e-9)", e)};
     }},
    {"DN comparison under support separation", [] {
       const double e = one("liouville", "dn_comparison.max_gap");
       return Outcome{e <= 1e-9, fmt("max gap %.3g (<= 1e-9)", e)};
     }},
    {"nonuniqueness both directions", [] {
       const double dg = one("nonuniqueness", "dn_gap_disjoint_windows");
       const double gd = one("nonuniqueness", "max_gamma_difference");
       const double ov = one("nonuniqueness", "dn_gap_overlapping_windows");
       return Outcome{dg <= 1e-9 && gd >= 0.01 && ov > 1e-6,
                      fmt("disjoint gap %.3g (<= 1e-9), max|g1-g2| %.3g (>= 0.01), overlapping gap %.3g (> 1e-6)", dg, gd, ov)};
     }},
    {"reconstruction closed loop", [] {
       const double e = one("reconstruction", "reconstruction.max_error");
       return Outcome{e <= 1e-6, fmt("max |g_rec - g| %.3g at N=128 (<= 1e-6)", e)};
     }},
    {"Runge residual", [] {
       const double inc = one("runge", "nonincreasing.max_increase");
       const double fin = one("runge", "final_residual");
       return Outcome{inc <= 0.0 && fin <= 0.1, fmt("max increase %.3g (<= 0), full-window residual %.3g (<= 0.1)", inc, fin)};
     }},
};

}  // namespace

int main() {
  run_all();
  int failed = 0;
  int n = 0;
  for (const auto& [name, check] : kCriteria) {
    ++n;
    Outcome o{false, ""};
    try {
      o = check();
    } catch (const std::exception& e) {
      o.detail = e.what();
    }
    if (!o.pass) ++failed;
    std::cout << "criterion " << n << ' ' << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << '\n';
  }
  std::cout << (failed ? "FAIL" : "PASS") << ": " << n - failed << '/' << n << " criteria\n";
  return failed ? 1 : 0;
}

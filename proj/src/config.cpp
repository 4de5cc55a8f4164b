#include "fraccald/config.hpp"

#include "fraccald/scenarios.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace fraccald {

namespace {

std::string mark_of(const std::string& source, const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.line < 0) return source;
  return source + ":" + std::to_string(m.line + 1);
}

[[noreturn]] void fail(const std::string& where, const std::string& field, const std::string& what) {
  throw ConfigError(where + ": field '" + field + "': " + what);
}

double as_number(const YAML::Node& n, const std::string& source, const std::string& field) {
  if (!n || !n.IsScalar()) fail(mark_of(source, n), field, "expected a number");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(mark_of(source, n), field, "expected a number, got '" + n.Scalar() + "'");
  }
}

Point as_point(const YAML::Node& n, const std::string& source, const std::string& field) {
  Point p = Point::Zero();
  if (n.IsScalar()) {
    p[0] = as_number(n, source, field);
    return p;
  }
  if (!n.IsSequence() || n.size() < 1 || n.size() > 2) fail(mark_of(source, n), field, "expected a number or a list of 1-2 numbers");
  for (std::size_t i = 0; i < n.size(); ++i) p[static_cast<Index>(i)] = as_number(n[i], source, field + "[" + std::to_string(i) + "]");
  return p;
}

void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& source,
                const std::string& prefix) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(mark_of(source, kv.first), prefix.empty() ? key : prefix + "." + key, "unknown field (allowed: " + list + ")");
    }
  }
}

ShapeSpec parse_shape(const YAML::Node& n, const std::string& source, const std::string& field) {
  if (!n || !n.IsMap()) fail(mark_of(source, n), field, "expected a shape mapping");
  if (!n["shape"]) fail(mark_of(source, n), field + ".shape", "missing field");
  ShapeSpec s;
  s.kind = n["shape"].as<std::string>();
  if (s.kind == "interval") {
    check_keys(n, {"shape", "lo", "hi"}, source, field);
    if (!n["lo"]) fail(mark_of(source, n), field + ".lo", "missing field");
    if (!n["hi"]) fail(mark_of(source, n), field + ".hi", "missing field");
    s.lo[0] = as_number(n["lo"], source, field + ".lo");
    s.hi[0] = as_number(n["hi"], source, field + ".hi");
  } else if (s.kind == "rectangle") {
    check_keys(n, {"shape", "lo", "hi"}, source, field);
    if (!n["lo"]) fail(mark_of(source, n), field + ".lo", "missing field");
    if (!n["hi"]) fail(mark_of(source, n), field + ".hi", "missing field");
    s.lo = as_point(n["lo"], source, field + ".lo");
    s.hi = as_point(n["hi"], source, field + ".hi");
  } else if (s.kind == "ball") {
    check_keys(n, {"shape", "center", "radius"}, source, field);
    if (!n["radius"]) fail(mark_of(source, n), field + ".radius", "missing field");
    if (n["center"]) s.center = as_point(n["center"], source, field + ".center");
    s.radius = as_number(n["radius"], source, field + ".radius");
  } else if (s.kind == "union") {
    check_keys(n, {"shape", "parts"}, source, field);
    const YAML::Node parts = n["parts"];
    if (!parts || !parts.IsSequence() || parts.size() == 0) fail(mark_of(source, n), field + ".parts", "expected a nonempty list of shapes");
    for (std::size_t i = 0; i < parts.size(); ++i) {
      s.parts.push_back(parse_shape(parts[i], source, field + ".parts[" + std::to_string(i) + "]"));
    }
  } else {
    fail(mark_of(source, n["shape"]), field + ".shape", "unknown shape '" + s.kind + "' (expected interval, rectangle, ball or union)");
  }
  return s;
}

FamilySpec parse_family(const YAML::Node& n, const std::string& source, const std::string& field,
                        double default_baseline, const std::filesystem::path& base_dir) {
  if (!n || !n.IsMap()) fail(mark_of(source, n), field, "expected a family mapping");
  check_keys(n, {"family", "value", "center", "radius", "width", "height", "baseline", "path"}, source, field);
  if (!n["family"]) fail(mark_of(source, n), field + ".family", "missing field");
  FamilySpec f;
  f.kind = n["family"].as<std::string>();
  f.baseline = default_baseline;
  static const std::set<std::string> kinds{"constant", "bump", "plateau", "hat", "csv"};
  if (!kinds.count(f.kind)) {
    fail(mark_of(source, n["family"]), field + ".family", "unknown family '" + f.kind + "' (expected constant, bump, plateau, hat or csv)");
  }
  if (f.kind == "constant" && !n["value"]) fail(mark_of(source, n), field + ".value", "missing field");
  if (f.kind == "csv" && !n["path"]) fail(mark_of(source, n), field + ".path", "missing field");
  if (n["value"]) f.value = as_number(n["value"], source, field + ".value");
  if (n["center"]) f.center = as_point(n["center"], source, field + ".center");
  if (n["radius"]) f.radius = as_number(n["radius"], source, field + ".radius");
  if (n["width"]) f.width = as_number(n["width"], source, field + ".width");
  if (n["height"]) f.height = as_number(n["height"], source, field + ".height");
  if (n["baseline"]) f.baseline = as_number(n["baseline"], source, field + ".baseline");
  if (n["path"]) {
    std::filesystem::path p = n["path"].as<std::string>();
    f.path = (p.is_relative() ? base_dir / p : p).string();
  }
  return f;
}

}  // namespace

bool ShapeSpec::contains(const Point& p, int dim) const {
  if (kind == "interval") return p[0] > lo[0] && p[0] < hi[0];
  if (kind == "rectangle") {
    bool in = p[0] > lo[0] && p[0] < hi[0];
    if (dim == 2) in = in && p[1] > lo[1] && p[1] < hi[1];
    return in;
  }
  if (kind == "ball") {
    const double dx = p[0] - center[0];
    const double dy = dim == 2 ? p[1] - center[1] : 0.0;
    return dx * dx + dy * dy < radius * radius;
  }
  for (const auto& part : parts) {
    if (part.contains(p, dim)) return true;
  }
  return false;
}

ParamTable::ParamTable(YAML::Node node, std::string source, std::string prefix)
    : node_(std::move(node)), source_(std::move(source)), prefix_(std::move(prefix)) {}

YAML::Node ParamTable::child(const std::string& key) const {
  if (!node_ || !node_.IsMap()) return YAML::Node();
  return node_[key];
}

std::string ParamTable::where(const YAML::Node& n) const { return mark_of(source_, n ? n : node_); }

bool ParamTable::has(const std::string& key) const { return static_cast<bool>(child(key)); }

double ParamTable::number(const std::string& key) const {
  const YAML::Node n = child(key);
  if (!n) fail(where(node_), prefix_ + "." + key, "missing field");
  return as_number(n, source_, prefix_ + "." + key);
}

double ParamTable::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long long ParamTable::integer_or(const std::string& key, long long fallback) const {
  if (!has(key)) return fallback;
  const double v = number(key);
  if (v != std::floor(v)) fail(where(child(key)), prefix_ + "." + key, "expected an integer");
  return static_cast<long long>(v);
}

bool ParamTable::flag_or(const std::string& key, bool fallback) const {
  const YAML::Node n = child(key);
  if (!n) return fallback;
  try {
    return n.as<bool>();
  } catch (const YAML::Exception&) {
    fail(where(n), prefix_ + "." + key, "expected true or false");
  }
}

std::string ParamTable::text_or(const std::string& key, const std::string& fallback) const {
  const YAML::Node n = child(key);
  if (!n) return fallback;
  if (!n.IsScalar()) fail(where(n), prefix_ + "." + key, "expected a string");
  return n.Scalar();
}

std::vector<double> ParamTable::numbers(const std::string& key) const {
  const YAML::Node n = child(key);
  const std::string field = prefix_ + "." + key;
  if (!n) fail(where(node_), field, "missing field");
  if (!n.IsSequence()) fail(where(n), field, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(as_number(n[i], source_, field + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> ParamTable::numbers_or(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

std::vector<std::vector<double>> ParamTable::rows(const std::string& key) const {
  const YAML::Node n = child(key);
  const std::string field = prefix_ + "." + key;
  if (!n) fail(where(node_), field, "missing field");
  if (!n.IsSequence()) fail(where(n), field, "expected a list of lists");
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!n[i].IsSequence()) fail(where(n[i]), f, "expected a list of numbers");
    std::vector<double> row;
    for (std::size_t j = 0; j < n[i].size(); ++j) row.push_back(as_number(n[i][j], source_, f + "[" + std::to_string(j) + "]"));
    out.push_back(std::move(row));
  }
  return out;
}

ShapeSpec ParamTable::shape(const std::string& key) const {
  const YAML::Node n = child(key);
  if (!n) fail(where(node_), prefix_ + "." + key, "missing field");
  return parse_shape(n, source_, prefix_ + "." + key);
}

FamilySpec ParamTable::family(const std::string& key) const {
  const YAML::Node n = child(key);
  if (!n) fail(where(node_), prefix_ + "." + key, "missing field");
  return parse_family(n, source_, prefix_ + "." + key, 0.0, std::filesystem::path(source_).parent_path());
}

std::map<std::string, ShapeSpec> ParamTable::shapes(const std::string& key) const {
  const YAML::Node n = child(key);
  const std::string field = prefix_ + "." + key;
  if (!n) fail(where(node_), field, "missing field");
  if (!n.IsMap() || n.size() == 0) fail(where(n), field, "expected a mapping of named shapes");
  std::map<std::string, ShapeSpec> out;
  for (const auto& kv : n) {
    const auto name = kv.first.as<std::string>();
    out.emplace(name, parse_shape(kv.second, source_, field + "." + name));
  }
  return out;
}

Grid ScenarioConfig::make_grid() const { return Grid(grid.dim, grid.extent, grid.points); }

DomainMask ScenarioConfig::make_mask() const { return make_mask(make_grid()); }

DomainMask ScenarioConfig::make_mask(const Grid& g) const {
  if (!domain) throw ConfigError(source.string() + ": field 'domain': missing field");
  const int dim = g.dim();
  const ShapeSpec dom = *domain;
  std::map<std::string, PointPredicate> win;
  for (const auto& [name, shape] : windows) {
    win.emplace(name, [shape, dim](const Point& p) { return shape.contains(p, dim); });
  }
  return mask_from_predicate(g, [dom, dim](const Point& p) { return dom.contains(p, dim); }, win);
}

double ScenarioConfig::order() const {
  if (!s) throw ConfigError(source.string() + ": field 'operator.s': missing field");
  return *s;
}

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": YAML syntax error: " + e.msg);
  }
  if (!root || !root.IsMap()) throw ConfigError(source + ": top level must be a mapping");
  check_keys(root, {"schema", "scenario", "seed", "output", "grid", "domain", "windows", "operator", "potential",
                    "conductivity", "params"},
             source, "");

  ScenarioConfig cfg;
  cfg.source = source;
  if (!root["schema"]) fail(mark_of(source, root), "schema", "missing field");
  const auto schema = root["schema"].as<std::string>();
  if (schema != kConfigSchema) {
    fail(mark_of(source, root["schema"]), "schema", "unsupported schema '" + schema + "' (expected " + kConfigSchema + ")");
  }
  if (!root["scenario"]) fail(mark_of(source, root), "scenario", "missing field");
  cfg.scenario = root["scenario"].as<std::string>();
  const ScenarioInfo* info = find_scenario(cfg.scenario);
  if (!info) {
    std::string names;
    for (const auto& s : scenario_catalog()) names += (names.empty() ? "" : ", ") + s.name;
    fail(mark_of(source, root["scenario"]), "scenario", "unknown scenario '" + cfg.scenario + "' (valid: " + names + ")");
  }
  if (root["seed"]) {
    const double seed = as_number(root["seed"], source, "seed");
    if (seed < 0 || seed != std::floor(seed)) fail(mark_of(source, root["seed"]), "seed", "expected a nonnegative integer");
    cfg.seed = static_cast<std::uint64_t>(seed);
  }
  cfg.output = root["output"] ? root["output"].as<std::string>() : cfg.scenario;

  const YAML::Node g = root["grid"];
  if (!g || !g.IsMap()) fail(mark_of(source, g ? g : root), "grid", "missing field");
  check_keys(g, {"dim", "extent", "points"}, source, "grid");
  for (const char* k : {"dim", "extent", "points"}) {
    if (!g[k]) fail(mark_of(source, g), std::string("grid.") + k, "missing field");
  }
  cfg.grid.dim = static_cast<int>(as_number(g["dim"], source, "grid.dim"));
  cfg.grid.extent = as_number(g["extent"], source, "grid.extent");
  cfg.grid.points = static_cast<Index>(as_number(g["points"], source, "grid.points"));
  try {
    (void)cfg.make_grid();
  } catch (const DomainError& e) {
    fail(mark_of(source, g), "grid", e.what());
  }

  if (root["domain"]) cfg.domain = parse_shape(root["domain"], source, "domain");
  if (const YAML::Node w = root["windows"]) {
    if (!w.IsMap()) fail(mark_of(source, w), "windows", "expected a mapping of named shapes");
    for (const auto& kv : w) {
      const auto name = kv.first.as<std::string>();
      cfg.windows.emplace(name, parse_shape(kv.second, source, "windows." + name));
    }
  }
  if (const YAML::Node op = root["operator"]) {
    if (!op.IsMap()) fail(mark_of(source, op), "operator", "expected a mapping");
    check_keys(op, {"s", "flavor"}, source, "operator");
    if (op["s"]) cfg.s = as_number(op["s"], source, "operator.s");
    if (op["flavor"]) {
      try {
        cfg.flavor = flavor_from_string(op["flavor"].as<std::string>());
      } catch (const DomainError& e) {
        fail(mark_of(source, op["flavor"]), "operator.flavor", e.what());
      }
    }
  }
  const auto base_dir = std::filesystem::path(source).parent_path();
  if (root["potential"]) cfg.potential = parse_family(root["potential"], source, "potential", 0.0, base_dir);
  if (root["conductivity"]) cfg.conductivity = parse_family(root["conductivity"], source, "conductivity", 1.0, base_dir);
  cfg.params = ParamTable(root["params"], source, "params");

  for (const std::string& req : info->required) {
    bool present = false;
    if (req == "domain") present = cfg.domain.has_value();
    else if (req == "operator.s") present = cfg.s.has_value();
    else if (req == "conductivity") present = cfg.conductivity.has_value();
    else if (req == "potential") present = cfg.potential.has_value();
    else if (req.rfind("windows.", 0) == 0) present = cfg.windows.count(req.substr(8)) > 0;
    else if (req.rfind("params.", 0) == 0) present = cfg.params.has(req.substr(7));
    if (!present) fail(mark_of(source, root), req, "missing field (required by scenario " + cfg.scenario + ")");
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path.string());
}

}  // namespace fraccald

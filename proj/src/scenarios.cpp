#include "fraccald/scenarios.hpp"

#include "fraccald/csv.hpp"
#include "fraccald/liouville.hpp"
#include "fraccald/poincare.hpp"
#include "fraccald/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>

namespace fraccald {

namespace {

using json = nlohmann::json;

class Recorder {
 public:
  explicit Recorder(ScenarioResult& r) : r_(r) {}

  void check(const std::string& name, double value, const std::string& relation, double threshold) {
    bool ok = false;
    if (relation == "<=") ok = value <= threshold;
    else if (relation == "<") ok = value < threshold;
    else if (relation == ">=") ok = value >= threshold;
    else if (relation == ">") ok = value > threshold;
    else if (relation == "==") ok = value == threshold;
    ok = ok && !std::isnan(value);
    r_.assertions.push_back({name, value, threshold, relation, ok});
    r_.pass = r_.pass && ok;
  }

  json& metrics() { return r_.metrics; }

 private:
  ScenarioResult& r_;
};

Field exterior_noise(const DomainMask& mask, Rng& rng) {
  Field f = rng.noise(mask.grid());
  for (Index i : mask.interior()) f[i] = 0.0;
  return f;
}

Field window_noise(const Grid& g, const IndexList& window, Rng& rng) {
  Field f = Field::zeros(g);
  for (Index i : window) f[i] = rng.uniform();
  return f;
}

// Values in [lo, hi] drawn pointwise.
Field positive_noise(const Grid& g, Rng& rng, double lo, double hi) {
  Field f = rng.noise(g);
  f.values() = (lo + 0.5 * (hi - lo) * (f.values().array() + 1.0)).matrix();
  return f;
}

Point domain_center(const ScenarioConfig& cfg) {
  const ShapeSpec& d = *cfg.domain;
  if (d.kind == "ball") return d.center;
  if (d.kind == "interval" || d.kind == "rectangle") return 0.5 * (d.lo + d.hi);
  return Point::Zero();
}

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

json grid_json(const Grid& g) {
  return {{"dim", g.dim()}, {"extent", g.extent()}, {"points", g.points_per_dim()}, {"spacing", g.spacing()}};
}

// ---------------------------------------------------------------------------

void run_poincare_sweep(const ScenarioConfig& cfg, const std::filesystem::path& out, Recorder& rec) {
  const Grid g = cfg.make_grid();
  const DomainMask mask = cfg.make_mask(g);
  const std::string domain_id = cfg.params.text_or("domain_id", "domain");
  const auto pairs = cfg.params.rows("pairs");

  CsvWriter csv(out / "poincare.csv", {"dim", "domain_id", "s", "t", "N", "L", "constant", "residual"});
  json rows = json::array();
  for (const auto& pr : pairs) {
    if (pr.size() != 2) throw ConfigError(cfg.source.string() + ": field 'params.pairs': each entry must be [s, t]");
    const PoincareEstimate est = poincare_constant(pr[0], pr[1], mask);
    csv.row({static_cast<long long>(g.dim()), domain_id, pr[0], pr[1], static_cast<long long>(g.points_per_dim()),
             g.extent(), est.constant, est.residual});
    rows.push_back({{"s", pr[0]}, {"t", pr[1]}, {"constant", est.constant}, {"residual", est.residual}});
    const std::string tag = "pair(" + short_real(pr[0]) + "," + short_real(pr[1]) + ")";
    rec.check(tag + ".residual", est.residual, "<=", 1e-8);
    if (pr[0] == pr[1]) rec.check(tag + ".equal_orders_constant", est.constant, "==", 1.0);
  }
  rec.metrics()["constants"] = rows;

  if (cfg.params.has("expect")) {
    for (const auto& e : cfg.params.rows("expect")) {
      if (e.size() != 4) throw ConfigError(cfg.source.string() + ": field 'params.expect': entries are [s, t, value, rel_tol]");
      const double c = poincare_constant(e[0], e[1], mask).constant;
      rec.check("expect(" + short_real(e[0]) + "," + short_real(e[1]) + ").relative_error",
                std::abs(c - e[2]) / std::abs(e[2]), "<=", e[3]);
    }
  }

  // Plane waves are eigenfields of the spectral operator.
  const auto eig_grid = cfg.params.numbers_or("eigen_grid", {2.0 * std::numbers::pi, 32.0});
  const Grid ge(g.dim(), eig_grid.at(0), static_cast<Index>(eig_grid.at(1)));
  double worst = 0.0;
  for (double s : cfg.params.numbers_or("eigen_orders", {0.25, 0.5, 0.75, 1.5})) {
    const OperatorKernel k = OperatorKernel::spectral(ge, s);
    for (Index bin = 0; bin < ge.size(); ++bin) {
      const MultiIndex mi = ge.multi_index(bin);
      const double kx = ge.wavenumber(mi[0]);
      const double ky = ge.dim() == 2 ? ge.wavenumber(mi[1]) : 0.0;
      const double lambda = std::pow(std::hypot(kx, ky), 2.0 * s);
      for (int phase = 0; phase < 2; ++phase) {
        const Field u = Field::from_function(ge, [&](const Point& p) {
          const double arg = kx * p[0] + ky * p[1];
          return phase == 0 ? std::cos(arg) : std::sin(arg);
        });
        const double un = u.values().cwiseAbs().maxCoeff();
        if (un < 1e-8) continue;
        const Field v = frac_laplacian(k, u);
        const double err = (v.values() - lambda * u.values()).cwiseAbs().maxCoeff();
        worst = std::max(worst, lambda > 0.0 ? err / (lambda * un) : err / un);
      }
    }
  }
  rec.check("plane_wave_eigenrelation.max_relative_error", worst, "<=", 1e-12);

  // Rigid motions of the domain.
  const auto mp = cfg.params.numbers_or("motion_pair", {0.0, 0.5});
  const double cells = cfg.params.number_or("shift_cells", 3.0);
  std::vector<std::pair<std::string, Motion>> motions;
  motions.emplace_back("identity", Motion{});
  motions.emplace_back("translation", Motion::translate(Point(cells * g.spacing(), g.dim() == 2 ? -cells * g.spacing() : 0.0)));
  for (int a = 0; a < g.dim(); ++a) motions.emplace_back("reflection" + std::to_string(a), Motion::reflect(a));
  if (g.dim() == 2) motions.emplace_back("axis_swap", Motion::swap());
  json inv = json::object();
  for (const auto& [name, motion] : motions) {
    const InvarianceReport r = rigid_invariance_check(mask, motion, mp.at(0), mp.at(1));
    inv[name] = r.relative_difference;
    rec.check("rigid_motion." + name + ".relative_difference", r.relative_difference, "<=", 1e-10);
  }
  rec.metrics()["rigid_motion"] = inv;
}

void run_interpolation_check(const ScenarioConfig& cfg, const std::filesystem::path& out, Recorder& rec) {
  const Grid g = cfg.make_grid();
  const auto domains = cfg.params.shapes("domains");
  const auto tuples = cfg.params.rows("tuples");
  const double tol = cfg.params.number_or("tol", 1e-3);
  CsvWriter csv(out / "interpolation.csv",
                {"domain_id", "z", "r", "s", "t", "c_rz", "c_ts", "bound", "ratio", "holds"});
  int count = 0;
  double worst = 0.0;
  for (const auto& [id, shape] : domains) {
    const int dim = g.dim();
    const DomainMask mask = mask_from_predicate(g, [shape, dim](const Point& p) { return shape.contains(p, dim); });
    for (const auto& tp : tuples) {
      if (tp.size() != 4) throw ConfigError(cfg.source.string() + ": field 'params.tuples': entries are [z, r, s, t]");
      InterpolationReport rep;
      try {
        rep = interpolation_check(mask, tp[0], tp[1], tp[2], tp[3], tol);
      } catch (const DomainError& e) {
        throw ConfigError(cfg.source.string() + ": field 'params.tuples': " + e.what());
      }
      csv.row({id, tp[0], tp[1], tp[2], tp[3], rep.c_rz, rep.c_ts, rep.bound, rep.ratio,
               static_cast<long long>(rep.holds)});
      ++count;
      worst = std::max(worst, rep.ratio);
      rec.check(id + ".tuple" + std::to_string(count) + ".ratio", rep.ratio, "<=", 1.0 + tol);
    }
  }
  rec.metrics()["tuples_checked"] = count;
  rec.metrics()["max_ratio"] = worst;
}

void run_cylinder_limit(const ScenarioConfig& cfg, const std::filesystem::path& out, Recorder& rec) {
  const auto section = cfg.params.numbers("section");
  if (section.size() != 2) throw ConfigError(cfg.source.string() + ": field 'params.section': expected [lo, hi]");
  const auto elong = cfg.params.numbers("elongations");
  if (cfg.grid.dim != 2) throw ConfigError(cfg.source.string() + ": field 'grid.dim': cylinder_limit needs a 2-d grid");
  const CylinderReport rep = cylinder_limit(cfg.grid.extent, cfg.grid.points, section[0], section[1], elong, cfg.order());
  CsvWriter csv(out / "cylinder.csv", {"A", "constant", "section_constant", "relative_gap"});
  for (std::size_t i = 0; i < elong.size(); ++i) {
    const double gap = (rep.section_constant - rep.constants[i]) / rep.section_constant;
    csv.row({elong[i], rep.constants[i], rep.section_constant, gap});
  }
  rec.metrics()["constants"] = rep.constants;
  rec.metrics()["section_constant"] = rep.section_constant;
  rec.metrics()["relative_gap"] = rep.relative_gap;
  rec.check("relative_gap_at_largest_elongation", std::abs(rep.relative_gap), "<", cfg.params.number_or("max_gap", 0.05));
  double drop = 0.0;
  for (std::size_t i = 1; i < rep.constants.size(); ++i) drop = std::max(drop, rep.constants[i - 1] - rep.constants[i]);
  rec.check("elongation_monotonicity.max_drop", drop, "<=", 1e-8);
}

void run_runge_decay(const ScenarioConfig& cfg, const std::filesystem::path& out, Recorder& rec) {
  const Grid g = cfg.make_grid();
  const DomainMask mask = cfg.make_mask(g);
  const double s = cfg.order();
  const OperatorKernel k = cfg.flavor == Flavor::kernel ? OperatorKernel::kernel(g, s) : OperatorKernel::spectral(g, s);
  const Field q = cfg.potential ? make_family(g, *cfg.potential) : Field::constant(g, cfg.params.number_or("delta", 0.01));
  const BilinearForm form = dirichlet_form(k) + potential_form(g, q);

  FamilySpec target_spec;
  target_spec.kind = "hat";
  target_spec.center = domain_center(cfg);
  target_spec.radius = 0.9;
  if (cfg.params.has("target")) target_spec = cfg.params.family("target");
  const Field target = mask.restrict_to_interior(make_family(g, target_spec));
  const IndexList window = cfg.windows.count("source") ? mask.window("source") : mask.exterior();
  const Index n = cfg.params.integer_or("n_sources", static_cast<long long>(window.size()));
  const std::vector<double> profile = runge_profile(form, mask, window, target, n);

  CsvWriter csv(out / "runge.csv", {"n_sources", "residual"});
  double worst_increase = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    csv.row({static_cast<long long>(i + 1), profile[i]});
    if (i > 0) worst_increase = std::max(worst_increase, profile[i] - profile[i - 1] * (1.0 + 1e-12));
  }
  rec.metrics()["final_residual"] = profile.back();
  rec.metrics()["first_residual"] = profile.front();
  rec.metrics()["sources"] = profile.size();
  rec.check("nonincreasing.max_increase", worst_increase, "<=", 0.0);
  rec.check("final_residual", profile.back(), "<=", cfg.params.number_or("max_residual", 0.1));
}

void run_alessandrini_suite(const ScenarioConfig& cfg, const std::filesystem::path& out, Recorder& rec) {
  const Grid g = cfg.make_grid();
  const DomainMask mask = cfg.make_mask(g);
  const double s = cfg.order();
  Rng root(cfg.seed);
  const OperatorKernel spec = OperatorKernel::spectral(g, s);
  const OperatorKernel kern = OperatorKernel::kernel(g, s);
  const BilinearForm lap = dirichlet_form(spec);
  const double drift = cfg.params.number_or("drift", 0.3);

  auto potential_family = [&](Rng& r) { return lap + potential_form(g, positive_noise(g, r, 0.5, 1.0)); };
  auto pdo_family = [&](Rng& r) {
    std::map<MultiIndexAlpha, Field> coeffs;
    coeffs.emplace(MultiIndexAlpha{0, 0}, positive_noise(g, r, 0.5, 1.0));
    Field a1 = r.noise(g);
    a1.values() *= drift;
    coeffs.emplace(MultiIndexAlpha{1, 0}, a1);
    return pdo_form(spec, PdoSpec(1, coeffs));
  };
  auto conductivity_family = [&](Rng& r) { return conductivity_form(kern, positive_noise(g, r, 0.5, 2.0)); };
  const std::vector<std::pair<std::string, std::function<BilinearForm(Rng&)>>> families{
      {"potential", potential_family}, {"pdo", pdo_family}, {"conductivity", conductivity_family}};

  const long long n_wp = cfg.params.integer_or("wellposed_trials", 20);
  json wp = json::object();
  for (const auto& [name, make] : families) {
    Rng r = root.split("wellposed/" + name);
    double worst_res = 0.0;
    double worst_unique = 0.0;
    for (long long i = 0; i < n_wp; ++i) {
      const BilinearForm form = make(r);
      const ExteriorSolver solver(form, mask);
      const Field f = r.noise(g);
      const Solution sol = solver.solve(f);
      Field f2 = f;
      for (Index j : mask.interior()) f2[j] += r.uniform();
      const Solution sol2 = solver.solve(f2);
      worst_res = std::max(worst_res, sol.residual);
      worst_unique = std::max(worst_unique, (sol.u.values() - sol2.u.values()).cwiseAbs().maxCoeff());
    }
    wp[name] = {{"max_residual", worst_res}, {"max_interior_modification_change", worst_unique}};
    rec.check("wellposed." + name + ".max_residual", worst_res, "<=", 1e-9);
    rec.check("wellposed." + name + ".interior_modification_change", worst_unique, "==", 0.0);
  }
  rec.metrics()["wellposedness"] = wp;

  const long long n_al = cfg.params.integer_or("alessandrini_trials", 50);
  CsvWriter csv(out / "alessandrini.csv", {"instance", "family", "lhs", "rhs", "gap"});
  Rng ra = root.split("alessandrini");
  double worst_al = 0.0;
  for (long long i = 0; i < n_al; ++i) {
    const bool pdo = i % 2 == 1;
    const BilinearForm b1 = pdo ? pdo_family(ra) : potential_family(ra);
    const BilinearForm b2 = pdo ? pdo_family(ra) : potential_family(ra);
    const DNMap dn1 = assemble_dn(b1, mask);
    const DNMap dn2 = assemble_dn(b2, mask);
    const Field f = exterior_noise(mask, ra);
    const Field h = exterior_noise(mask, ra);
    const AlessandriniSides sides = alessandrini_gap(dn1, dn2, b1, b2, mask, f, h);
    const double gap = std::abs(sides.lhs - sides.rhs) / (1.0 + std::abs(sides.lhs));
    worst_al = std::max(worst_al, gap);
    csv.row({i, std::string(pdo ? "pdo" : "potential"), sides.lhs, sides.rhs, gap});
  }
  rec.metrics()["alessandrini_max_gap"] = worst_al;
  rec.check("alessandrini.max_relative_gap", worst_al, "<=", 1e-9);

  Rng rp = root.split("adjoint");
  const BilinearForm bp = pdo_family(rp);
  const DNMap dn = assemble_dn(bp, mask);
  const DNMap dn_adj = assemble_dn(adjoint(bp), mask);
  const double adj_gap = (dn.matrix.transpose() - dn_adj.matrix).cwiseAbs().maxCoeff() / dn.matrix.cwiseAbs().maxCoeff();
  const double asym = (dn.matrix - dn.matrix.transpose()).cwiseAbs().maxCoeff() / dn.matrix.cwiseAbs().maxCoeff();
  rec.metrics()["dn_adjoint_gap"] = adj_gap;
  rec.metrics()["pdo_dn_asymmetry"] = asym;
  rec.check("dn_adjoint.relative_gap", adj_gap, "<=", 1e-10);

  Rng ri = root.split("interior");
  const Field q1 = positive_noise(g, ri, 0.5, 1.0);
  Field q2 = q1;
  q2.values() += bump(g, domain_center(cfg), cfg.params.number_or("bump_radius", 0.5),
                      cfg.params.number_or("bump_height", 0.5)).values();
  q2 = mask.restrict_to_interior(q2);
  for (Index e : mask.exterior()) q2[e] = q1[e];
  const IndexList& w1 = cfg.windows.count("W1") ? mask.window("W1") : mask.exterior();
  const IndexList& w2 = cfg.windows.count("W2") ? mask.window("W2") : mask.exterior();
  const DNMap d1 = assemble_dn(lap + potential_form(g, q1), mask);
  const DNMap d1b = assemble_dn(lap + potential_form(g, q1), mask);
  const DNMap d2 = assemble_dn(lap + potential_form(g, q2), mask);
  const double differ = window_gap(d1, d2, w1, w2);
  const double same = window_gap(d1, d1b, w1, w2);
  rec.metrics()["interior_determination"] = {{"different_potentials_gap", differ}, {"equal_potentials_gap", same}};
  rec.check("interior_determination.different_potentials_gap", differ, ">=", 1e-6);
  rec.check("interior_determination.equal_potentials_gap", same, "<=", 1e-11);
}

void run_liouville_suite(const ScenarioConfig& cfg, const std::filesystem::path& out, Recorder& rec) {
  const Grid g = cfg.make_grid();
  const DomainMask mask = cfg.make_mask(g);
  const double s = cfg.order();
  const OperatorKernel k = OperatorKernel::kernel(g, s);
  Rng root(cfg.seed);
  CsvWriter csv(out / "liouville.csv", {"check", "trial", "value"});

  // Pairing equals <K u, v>.
  Rng rp = root.split("pairing");
  double worst_pair = 0.0;
  for (long long i = 0; i < cfg.params.integer_or("pairing_trials", 100); ++i) {
    const Field u = rp.noise(g);
    const Field v = rp.noise(g);
    const Field ku = frac_laplacian(k, u);
    const double scale = g.cell_volume() * ku.values().cwiseProduct(v.values()).cwiseAbs().sum();
    const double gap = std::abs(frac_gradient_pairing(k, u, v) - inner(ku, v)) / scale;
    worst_pair = std::max(worst_pair, gap);
    csv.row({std::string("pairing"), i, gap});
  }
  rec.check("pairing_identity.max_relative_gap", worst_pair, "<=", 1e-12);

  // Liouville identity for random conductivities.
  Rng rl = root.split("identity");
  double worst_id = 0.0;
  for (long long i = 0; i < cfg.params.integer_or("identity_trials", 100); ++i) {
    const Conductivity c = make_conductivity(positive_noise(g, rl, 0.5, 4.0), k);
    const LiouvilleGap lg = liouville_identity_gap(c, k, rl.noise(g), rl.noise(g));
    worst_id = std::max(worst_id, lg.gap);
    csv.row({std::string("identity"), i, lg.gap});
  }
  rec.check("liouville_identity.max_gap", worst_id, "<=", 1e-11);

  FamilySpec gspec;
  gspec.kind = "bump";
  gspec.center = domain_center(cfg);
  gspec.radius = 0.8;
  gspec.height = 0.5;
  gspec.baseline = 1.0;
  if (cfg.conductivity) gspec = *cfg.conductivity;
  const Conductivity c = make_conductivity(make_family(g, gspec), k);

  // Conductivity solution vs Schroedinger solution.
  Rng rs = root.split("correspondence");
  const BilinearForm bg = conductivity_form(k, c.gamma);
  const BilinearForm bq = schrodinger_form(c, k);
  const ExteriorSolver sg(bg, mask);
  const ExteriorSolver sq(bq, mask);
  double worst_corr = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Field f = exterior_noise(mask, rs);
    const Field v = transform(c, sg.solve(f).u, Direction::to_schrodinger);
    const Field w = sq.solve(transform(c, f, Direction::to_schrodinger)).u;
    const double diff = (v.values() - w.values()).cwiseAbs().maxCoeff() / std::max(1.0, w.values().cwiseAbs().maxCoeff());
    worst_corr = std::max(worst_corr, diff);
    csv.row({std::string("correspondence"), static_cast<long long>(i), diff});
  }
  rec.check("solution_correspondence.max_difference", worst_corr, "<=", 1e-9);

  // DN comparison with data away from supp m.
  Rng rd = root.split("dn");
  const IndexList& w1 = cfg.windows.count("W1") ? mask.window("W1") : mask.exterior();
  const IndexList& w2 = cfg.windows.count("W2") ? mask.window("W2") : mask.exterior();
  double worst_dn = 0.0;
  for (int i = 0; i < 5; ++i) {
    const DnComparison cmp = dn_comparison_gap(c, k, mask, window_noise(g, w1, rd), window_noise(g, w2, rd));
    worst_dn = std::max(worst_dn, cmp.gap);
    csv.row({std::string("dn_comparison"), static_cast<long long>(i), cmp.gap});
  }
  rec.check("dn_comparison.max_gap", worst_dn, "<=", 1e-9);

  // Kernel flavor against a fine spectral oracle.
  const double ext = cfg.params.number_or("consistency_extent", 16.0);
  const double cs = cfg.params.number_or("consistency_s", 0.6);
  const auto ladder = cfg.params.numbers_or("consistency_points", {64, 128, 256});
  const auto oracle_n = static_cast<Index>(cfg.params.number_or("consistency_oracle_points", 1024));
  const Grid go(1, ext, oracle_n);
  auto profile = [](const Point& p) { return std::exp(-8.0 * p[0] * p[0]); };
  const Field oracle = frac_laplacian(OperatorKernel::spectral(go, cs), Field::from_function(go, profile));
  CsvWriter cc(out / "consistency.csv", {"N", "relative_discrepancy"});
  std::vector<double> errs;
  for (double nd : ladder) {
    const auto n = static_cast<Index>(nd);
    const Grid gn(1, ext, n);
    const Field v = frac_laplacian(OperatorKernel::kernel(gn, cs), Field::from_function(gn, profile));
    const Index stride = oracle_n / n;
    double num = 0.0;
    double den = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double o = oracle[i * stride];
      num += (v[i] - o) * (v[i] - o);
      den += o * o;
    }
    errs.push_back(std::sqrt(num / den));
    cc.row({static_cast<long long>(n), errs.back()});
  }
  double worst_step = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < errs.size(); ++i) worst_step = std::max(worst_step, errs[i] - errs[i - 1]);
  rec.metrics()["consistency_errors"] = errs;
  if (errs.size() > 1) rec.check("kernel_spectral_consistency.max_step_change", worst_step, "<", 0.0);
  rec.metrics()["worst"] = {{"pairing", worst_pair}, {"identity", worst_id}, {"correspondence", worst_corr},
                            {"dn_comparison", worst_dn}};
}

void run_nonuniqueness_demo(const ScenarioConfig& cfg, const std::filesystem::path& out, Recorder& rec) {
  const Grid g = cfg.make_grid();
  const DomainMask mask = cfg.make_mask(g);
  const OperatorKernel k = OperatorKernel::kernel(g, cfg.order());
  const Conductivity c1 = make_conductivity(make_family(g, *cfg.conductivity), k);
  const Field m0 = mask.restrict_to_exterior(make_family(g, cfg.params.family("m0")));
  const Conductivity c2 = nonuniqueness_pair(c1, k, mask, m0);

  const DNMap dn1 = assemble_dn(conductivity_form(k, c1.gamma), mask);
  const DNMap dn2 = assemble_dn(conductivity_form(k, c2.gamma), mask);
  const IndexList& w1 = mask.window("W1");
  const IndexList& w2 = mask.window("W2");
  const double disjoint = std::max(window_gap(dn1, dn2, w1, w2), window_gap(dn1, dn2, w2, w1));
  const double overlap = window_gap(dn1, dn2, w1, w1);
  const double gamma_diff = (c1.gamma.values() - c2.gamma.values()).cwiseAbs().maxCoeff();
  double q_diff = 0.0;
  for (Index i : mask.interior()) q_diff = std::max(q_diff, std::abs(c1.q[i] - c2.q[i]));

  rec.metrics()["dn_gap"] = disjoint;
  rec.metrics()["overlap_gap"] = overlap;
  rec.metrics()["gamma_difference"] = gamma_diff;
  rec.metrics()["interior_q_difference"] = q_diff;
  rec.check("dn_gap_disjoint_windows", disjoint, "<=", 1e-9);
  rec.check("max_gamma_difference", gamma_diff, ">=", 0.01);
  rec.check("dn_gap_overlapping_windows", overlap, ">", 1e-6);
  rec.check("interior_potential_difference", q_diff, "<=", 1e-10);

  write_field_csv(out / "nonuniqueness.csv", {{"gamma1", &c1.gamma}, {"gamma2", &c2.gamma}, {"m1", &c1.m},
                                              {"m2", &c2.m}, {"q1", &c1.q}, {"q2", &c2.q}});
}

void run_reconstruction_demo(const ScenarioConfig& cfg, const std::filesystem::path& out, Recorder& rec) {
  const Grid g = cfg.make_grid();
  const DomainMask mask = cfg.make_mask(g);
  const OperatorKernel k = OperatorKernel::kernel(g, cfg.order());
  const Field gamma = make_family(g, *cfg.conductivity);
  for (Index e : mask.exterior()) {
    if (gamma[e] != 1.0) throw ConfigError(cfg.source.string() + ": field 'conductivity': must equal 1 outside the domain");
  }
  const DNMap data = assemble_dn(conductivity_form(k, gamma), mask);
  const ReconstructionResult res = reconstruct_conductivity(data, k);
  const double err = (res.gamma.values() - gamma.values()).cwiseAbs().maxCoeff();

  const DNMap flat = assemble_dn(dirichlet_form(k), mask);
  const ReconstructionResult res1 = reconstruct_conductivity(flat, k);
  const double err1 = (res1.gamma.values().array() - 1.0).abs().maxCoeff();

  rec.metrics()["max_error"] = err;
  rec.metrics()["fit_residual"] = res.fit_residual;
  rec.metrics()["low_confidence"] = res.low_confidence;
  rec.metrics()["iterations"] = res.iterations;
  rec.metrics()["unit_conductivity_error"] = err1;
  rec.check("reconstruction.max_error", err, "<=", cfg.params.number_or("max_error", 1e-6));
  rec.check("unit_conductivity.max_error", err1, "<=", 1e-8);
  write_field_csv(out / "reconstruction.csv", {{"gamma_true", &gamma}, {"gamma_rec", &res.gamma}, {"q_rec", &res.q}});

  Rng rn(cfg.seed);
  CsvWriter noise(out / "noise.csv", {"level", "max_error", "fit_residual", "low_confidence"});
  json sweep = json::array();
  const double scale = data.matrix.cwiseAbs().maxCoeff();
  for (double level : cfg.params.numbers_or("noise_levels", {1e-10, 1e-8, 1e-6})) {
    Rng r = rn.split("noise/" + format_real(level));
    DNMap noisy = data;
    for (Index j = 0; j < noisy.matrix.cols(); ++j) {
      for (Index i = 0; i <= j; ++i) {
        const double d = level * scale * r.uniform();
        noisy.matrix(i, j) += d;
        if (i != j) noisy.matrix(j, i) += d;
      }
    }
    double e = std::numeric_limits<double>::quiet_NaN();
    double fit = e;
    bool low = true;
    try {
      const ReconstructionResult rr = reconstruct_conductivity(noisy, k);
      e = (rr.gamma.values() - gamma.values()).cwiseAbs().maxCoeff();
      fit = rr.fit_residual;
      low = rr.low_confidence;
    } catch (const NumericalError&) {
      // positivity lost at this noise level; recorded as NaN
    }
    noise.row({level, e, fit, static_cast<long long>(low)});
    sweep.push_back({{"level", level}, {"max_error", e}, {"fit_residual", fit}});
  }
  rec.metrics()["noise_sweep"] = sweep;
}

}  // namespace

const std::vector<ScenarioInfo>& scenario_catalog() {
  static const std::vector<ScenarioInfo> catalog{
      {"poincare_sweep", "Poincare constants over (s,t) pairs, plane-wave eigenrelation, rigid-motion invariance",
       {"domain", "params.pairs"}},
      {"interpolation_check", "Interpolation inequality for Poincare constants over parameter tuples and domains",
       {"params.domains", "params.tuples"}},
      {"cylinder_limit", "Constants of elongated rectangles against the 1-d section constant",
       {"operator.s", "params.section", "params.elongations"}},
      {"runge_decay", "Runge approximation residual versus number of exterior sources", {"domain", "operator.s"}},
      {"alessandrini_suite", "Well-posedness, Alessandrini identity, DN adjoint identity, interior determination",
       {"domain", "operator.s"}},
      {"liouville_suite", "Pairing identity, exact Liouville identity, solution and DN correspondence, kernel consistency",
       {"domain", "operator.s"}},
      {"nonuniqueness_demo", "Two conductivities with equal DN data on disjoint windows",
       {"domain", "operator.s", "conductivity", "windows.W1", "windows.W2", "params.m0"}},
      {"reconstruction_demo", "Conductivity recovery from noiseless and noisy exterior DN data",
       {"domain", "operator.s", "conductivity"}},
  };
  return catalog;
}

const ScenarioInfo* find_scenario(const std::string& name) {
  for (const auto& s : scenario_catalog()) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

ScenarioResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  ScenarioResult result;
  result.scenario = config.scenario;
  Recorder rec(result);
  using Runner = void (*)(const ScenarioConfig&, const std::filesystem::path&, Recorder&);
  static const std::map<std::string, Runner> runners{
      {"poincare_sweep", run_poincare_sweep},         {"interpolation_check", run_interpolation_check},
      {"cylinder_limit", run_cylinder_limit},         {"runge_decay", run_runge_decay},
      {"alessandrini_suite", run_alessandrini_suite}, {"liouville_suite", run_liouville_suite},
      {"nonuniqueness_demo", run_nonuniqueness_demo}, {"reconstruction_demo", run_reconstruction_demo},
  };
  const auto it = runners.find(config.scenario);
  if (it == runners.end()) throw ConfigError("unknown scenario '" + config.scenario + "'");
  try {
    it->second(config, out_dir, rec);
  } catch (const DomainError& e) {
    throw ConfigError(config.source.string() + ": " + e.what());
  }

  json manifest;
  manifest["schema"] = kConfigSchema;
  manifest["scenario"] = config.scenario;
  manifest["config"] = config.source.string();
  manifest["seed"] = config.seed;
  manifest["grid"] = grid_json(config.make_grid());
  if (config.s) manifest["operator"] = {{"s", *config.s}, {"flavor", to_string(config.flavor)}};
  manifest["metrics"] = result.metrics;
  json asserts = json::array();
  for (const auto& a : result.assertions) {
    asserts.push_back({{"name", a.name}, {"value", a.value}, {"relation", a.relation}, {"threshold", a.threshold},
                       {"pass", a.pass}});
  }
  manifest["assertions"] = asserts;
  manifest["pass"] = result.pass;
  std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
  return result;
}

}  // namespace fraccald

#include "fraccald/csv.hpp"
#include "fraccald/dnmap.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace fraccald;
using testing::max_abs;

namespace {

struct Setup {
  Grid g{1, 8.0, 64};
  DomainMask mask = testing::interval_mask(g, -1.0, 1.0, {{"W1", testing::interval(1.5, 3.0)}, {"W2", testing::interval(-3.0, -1.5)}});
  OperatorKernel spectral = OperatorKernel::spectral(g, 0.75);
  OperatorKernel kernel = OperatorKernel::kernel(g, 0.75);
};

BilinearForm potential(const Setup& s, const Field& q) { return dirichlet_form(s.spectral) + potential_form(s.g, q); }

BilinearForm drift(const Setup& s, Rng& rng) {
  std::map<MultiIndexAlpha, Field> c;
  c.emplace(MultiIndexAlpha{0, 0}, testing::positive_field(s.g, rng, 0.5, 1.0));
  Field a1 = rng.noise(s.g);
  a1.values() *= 0.3;
  c.emplace(MultiIndexAlpha{1, 0}, a1);
  return pdo_form(s.spectral, PdoSpec(1, c));
}

}  // namespace

TEST_CASE("dn map basics") {
  Setup s;
  Rng rng(21);
  const Field q = testing::positive_field(s.g, rng, 0.5, 1.0);
  const DNMap a = assemble_dn(potential(s, q), s.mask);
  const DNMap b = assemble_dn(potential(s, q), s.mask);
  CHECK(max_abs(Matrix(a.matrix - b.matrix)) <= 1e-12);
  CHECK(a.matrix.rows() == static_cast<Index>(s.mask.exterior().size()));
  CHECK(max_abs(Matrix(a.matrix - a.matrix.transpose())) <= 1e-10 * max_abs(a.matrix));

  const DNMap lap = assemble_dn(dirichlet_form(s.kernel), s.mask);
  const DNMap one = assemble_dn(conductivity_form(s.kernel, Field::constant(s.g, 1.0)), s.mask);
  CHECK(max_abs(Matrix(lap.matrix - one.matrix)) <= 1e-12);
}

TEST_CASE("dn pairing is the form on solutions and ignores interior data") {
  Setup s;
  Rng rng(22);
  const BilinearForm b = drift(s, rng);
  const ExteriorSolver solver(b, s.mask);
  const DNMap dn = assemble_dn(solver);
  for (int trial = 0; trial < 10; ++trial) {
    const Field f = testing::exterior_noise(s.mask, rng);
    Field g = testing::exterior_noise(s.mask, rng);
    const double direct = b(solver.solve(f).u, g);
    CHECK(dn.pairing(f, g) == doctest::Approx(direct).epsilon(1e-12));
    Field f2 = f;
    Field g2 = g;
    for (Index i : s.mask.interior()) {
      f2[i] = rng.uniform();
      g2[i] = rng.uniform();
    }
    CHECK(dn.pairing(f2, g2) == dn.pairing(f, g));
    CHECK(b(solver.solve(f2).u, g2) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("dn adjoint identity") {
  Setup s;
  Rng rng(23);
  const BilinearForm b = drift(s, rng);
  const DNMap dn = assemble_dn(b, s.mask);
  const DNMap dn_adj = assemble_dn(adjoint(b), s.mask);
  CHECK(max_abs(Matrix(dn.matrix.transpose() - dn_adj.matrix)) <= 1e-10 * max_abs(dn.matrix));
  CHECK(max_abs(Matrix(dn.matrix - dn.matrix.transpose())) > 1e-8);
}

TEST_CASE("alessandrini identity") {
  Setup s;
  Rng rng(24);
  for (int trial = 0; trial < 10; ++trial) {
    const BilinearForm b1 = trial % 2 ? drift(s, rng) : potential(s, testing::positive_field(s.g, rng, 0.5, 1.0));
    const BilinearForm b2 = trial % 2 ? drift(s, rng) : potential(s, testing::positive_field(s.g, rng, 0.5, 1.0));
    const DNMap d1 = assemble_dn(b1, s.mask);
    const DNMap d2 = assemble_dn(b2, s.mask);
    const Field f = testing::exterior_noise(s.mask, rng);
    const Field g = testing::exterior_noise(s.mask, rng);
    const AlessandriniSides sides = alessandrini_gap(d1, d2, b1, b2, s.mask, f, g);
    CHECK(std::abs(sides.lhs - sides.rhs) <= 1e-9 * (1.0 + std::abs(sides.lhs)));
    CHECK(std::abs(sides.lhs) > 1e-8);

    const AlessandriniSides same = alessandrini_gap(d1, d1, b1, b1, s.mask, f, g);
    CHECK(std::abs(same.lhs) <= 1e-10);
    CHECK(std::abs(same.rhs) <= 1e-10);
    const AlessandriniSides zero = alessandrini_gap(d1, d2, b1, b2, s.mask, Field::zeros(s.g), g);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);
  }
  const BilinearForm b = potential(s, Field::constant(s.g, 1.0));
  const DNMap d = assemble_dn(b, s.mask);
  CHECK_THROWS_AS(alessandrini_gap(d, d, b, b, s.mask, Field::constant(s.g, 1.0), Field::zeros(s.g)), DomainError);
}

TEST_CASE("interior determination") {
  Setup s;
  Rng rng(25);
  const Field q1 = testing::positive_field(s.g, rng, 0.5, 1.0);
  Field q2 = q1;
  for (Index i : s.mask.interior()) q2[i] += 0.5 * std::exp(-4.0 * std::pow(s.g.coordinate(i)[0], 2));
  const DNMap d1 = assemble_dn(potential(s, q1), s.mask);
  const DNMap d2 = assemble_dn(potential(s, q2), s.mask);
  const DNMap d1b = assemble_dn(potential(s, q1), s.mask);
  const IndexList& w1 = s.mask.window("W1");
  const IndexList& w2 = s.mask.window("W2");
  CHECK(window_gap(d1, d2, w1, w2) >= 1e-6);
  CHECK(window_gap(d1, d1b, w1, w2) <= 1e-11);
  CHECK(window_equal(d1, d1b, w1, w2, 0.0));
  CHECK_FALSE(window_equal(d1, d2, w1, w2, 1e-6));
  CHECK(d1.window_block(w1, w2).rows() == static_cast<Index>(w2.size()));
  CHECK(d1.window_block(w1, w2).cols() == static_cast<Index>(w1.size()));
}

TEST_CASE("dn csv export") {
  Setup s;
  const DNMap d = assemble_dn(potential(s, Field::constant(s.g, 1.0)), s.mask);
  const auto path = std::filesystem::temp_directory_path() / "fraccald_dn_test.csv";
  write_dn_csv(d, path);
  const CsvTable t = read_csv(path);
  CHECK(t.rows.size() == static_cast<std::size_t>(d.matrix.size()));
  const auto& row = t.rows[5];
  const auto r = std::stoll(row[t.column("row")]);
  const auto c = std::stoll(row[t.column("col")]);
  CHECK(std::stod(row[t.column("value")]) == d.matrix(r, c));
  CHECK(std::stoll(row[t.column("grid_row")]) == s.mask.exterior()[static_cast<std::size_t>(r)]);
  std::filesystem::remove(path);
}

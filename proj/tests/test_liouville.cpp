#include "fraccald/liouville.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace fraccald;
using testing::max_abs;

namespace {

Field bump_field(const Grid& g, double center, double radius, double height, double baseline) {
  return Field::from_function(g, [=](const Point& p) {
    const double z = (p[0] - center) / radius;
    return baseline + (z * z < 1.0 ? height * std::exp(1.0 - 1.0 / (1.0 - z * z)) : 0.0);
  });
}

struct Sides {
  long double conductivity;
  long double schrodinger;
};

// Both sides of the identity written out as plain double sums in extended precision.
Sides oracle_sides(const OperatorKernel& k, const Field& gamma, const Field& u, const Field& phi) {
  const Grid& g = k.grid();
  const Index n = g.size();
  std::vector<long double> a(static_cast<std::size_t>(n)), m(a.size());
  for (Index x = 0; x < n; ++x) {
    a[static_cast<std::size_t>(x)] = std::sqrt(static_cast<long double>(gamma[x]));
    m[static_cast<std::size_t>(x)] = a[static_cast<std::size_t>(x)] - 1.0L;
  }
  Sides out{0.0L, 0.0L};
  for (Index x = 0; x < n; ++x) {
    const auto ax = a[static_cast<std::size_t>(x)];
    long double km = 0.0L;
    for (Index y = 0; y < n; ++y) {
      if (x == y) continue;
      const long double w = k.weight(x, y);
      const auto ay = a[static_cast<std::size_t>(y)];
      out.conductivity += 0.5L * w * ax * ay * (u[x] - u[y]) * (phi[x] - phi[y]);
      out.schrodinger += 0.5L * w * (ax * u[x] - ay * u[y]) * (ax * phi[x] - ay * phi[y]);
      km += w * (m[static_cast<std::size_t>(x)] - m[static_cast<std::size_t>(y)]);
    }
    const long double q = -km / ax;
    out.schrodinger += q * ax * u[x] * ax * phi[x];
  }
  const long double h = g.cell_volume();
  out.conductivity *= h;
  out.schrodinger *= h;
  return out;
}

}  // namespace

TEST_CASE("pairwise expansion behind the identity") {
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const long double ax = 1.5L + rng.uniform(), ay = 1.5L + rng.uniform();
    const long double ux = rng.uniform(), uy = rng.uniform(), px = rng.uniform(), py = rng.uniform();
    const long double lhs = (ax * ux - ay * uy) * (ax * px - ay * py) - ax * ay * (ux - uy) * (px - py);
    const long double rhs = (ax - ay) * (ax * ux * px - ay * uy * py);
    CHECK(std::abs(static_cast<double>(lhs - rhs)) < 1e-15);
  }
}

TEST_CASE("liouville identity against the written-out oracle") {
  const Grid g(1, 4.0, 8);
  const OperatorKernel k = OperatorKernel::kernel(g, 0.4);
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Field gamma = testing::positive_field(g, rng, 0.5, 4.0);
    const Field u = rng.noise(g);
    const Field phi = rng.noise(g);
    const Conductivity c = make_conductivity(gamma, k);
    const LiouvilleGap gap = liouville_identity_gap(c, k, u, phi);
    const Sides o = oracle_sides(k, gamma, u, phi);
    CHECK(std::abs(static_cast<double>(o.conductivity - o.schrodinger)) < 1e-15);
    CHECK(gap.conductivity_side == doctest::Approx(static_cast<double>(o.conductivity)).epsilon(1e-12));
    CHECK(gap.schrodinger_side == doctest::Approx(static_cast<double>(o.schrodinger)).epsilon(1e-12));
    CHECK(gap.gap <= 1e-11);
  }
}

TEST_CASE("liouville identity on larger grids") {
  Rng rng(43);
  for (int dim : {1, 2}) {
    const Grid g(dim, 6.0, dim == 1 ? 64 : 16);
    const OperatorKernel k = OperatorKernel::kernel(g, 0.6);
    for (int trial = 0; trial < 20; ++trial) {
      const Conductivity c = make_conductivity(testing::positive_field(g, rng, 0.5, 4.0), k);
      CHECK(liouville_identity_gap(c, k, rng.noise(g), rng.noise(g)).gap <= 1e-11);
    }
    const Conductivity c3 = make_conductivity(Field::constant(g, 3.0), k);
    const Field u = rng.noise(g);
    const Field v = rng.noise(g);
    const LiouvilleGap lg = liouville_identity_gap(c3, k, u, v);
    CHECK(lg.conductivity_side == doctest::Approx(3.0 * frac_gradient_pairing(k, u, v)).epsilon(1e-12));
    const LiouvilleGap ones = liouville_identity_gap(c3, k, Field::constant(g, 1.0), Field::constant(g, 1.0));
    CHECK(std::abs(ones.conductivity_side) < 1e-12);
    CHECK(std::abs(ones.schrodinger_side) < 1e-12);
  }
}

TEST_CASE("conductivity bookkeeping") {
  const Grid g(1, 8.0, 64);
  const OperatorKernel k = OperatorKernel::kernel(g, 0.4);
  const Conductivity one = make_conductivity(Field::constant(g, 1.0), k);
  CHECK(max_abs(one.m.values()) == 0.0);
  CHECK(max_abs(one.q.values()) <= 1e-12);
  const Conductivity four = make_conductivity(Field::constant(g, 4.0), k);
  CHECK(max_abs(Vector(four.m.values().array() - 1.0)) <= 1e-12);
  CHECK(max_abs(four.q.values()) <= 1e-12);

  const Conductivity b = make_conductivity(bump_field(g, 0.0, 0.8, 0.5, 1.0), k);
  const Index far = g.nearest_index(Point(3.0, 0.0));
  CHECK(b.m[far] == 0.0);
  CHECK(b.q[far] != 0.0);  // nonlocal spread of the potential
  CHECK(b.gamma0 == doctest::Approx(1.0));

  CHECK_THROWS_AS(make_conductivity(Field::constant(g, 0.0), k), DomainError);
  CHECK_THROWS_AS(make_conductivity(Field::constant(g, 1.0), OperatorKernel::spectral(g, 0.4)), DomainError);
}

TEST_CASE("transform") {
  const Grid g(1, 8.0, 64);
  const OperatorKernel k = OperatorKernel::kernel(g, 0.4);
  Rng rng(44);
  const Conductivity c = make_conductivity(testing::positive_field(g, rng, 0.5, 4.0), k);
  const Field u = rng.noise(g);
  const Field back = transform(c, transform(c, u, Direction::to_schrodinger), Direction::to_conductivity);
  CHECK(max_abs(Vector(back.values() - u.values())) <= 1e-15 * max_abs(u.values()) * 2.0);
  const Conductivity one = make_conductivity(Field::constant(g, 1.0), k);
  CHECK(transform(one, u, Direction::to_schrodinger).values() == u.values());
}

TEST_CASE("solution correspondence") {
  const Grid g(1, 8.0, 64);
  const DomainMask mask = testing::interval_mask(g, -1.0, 1.0);
  const OperatorKernel k = OperatorKernel::kernel(g, 0.4);
  Rng rng(45);
  const Conductivity c = make_conductivity(bump_field(g, 0.0, 0.8, 0.5, 1.0), k);
  const ExteriorSolver sg(conductivity_form(k, c.gamma), mask);
  const ExteriorSolver sq(schrodinger_form(c, k), mask);
  for (int trial = 0; trial < 10; ++trial) {
    const Field f = testing::exterior_noise(mask, rng);
    const Field v = transform(c, sg.solve(f).u, Direction::to_schrodinger);
    const Field w = sq.solve(transform(c, f, Direction::to_schrodinger)).u;
    CHECK(max_abs(Vector(v.values() - w.values())) <= 1e-9);
  }
}

TEST_CASE("dn comparison under support separation") {
  const Grid g(1, 8.0, 64);
  const DomainMask mask = testing::interval_mask(g, -1.0, 1.0, {{"W1", testing::interval(1.5, 3.0)}, {"W2", testing::interval(-3.0, -1.5)}});
  const OperatorKernel k = OperatorKernel::kernel(g, 0.4);
  Rng rng(46);
  const Conductivity c = make_conductivity(bump_field(g, 0.0, 0.8, 0.5, 1.0), k);
  auto window_data = [&](const IndexList& w) {
    Field f = Field::zeros(g);
    for (Index i : w) f[i] = rng.uniform();
    return f;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const DnComparison cmp = dn_comparison_gap(c, k, mask, window_data(mask.window("W1")), window_data(mask.window("W2")));
    CHECK(cmp.gap <= 1e-9);
    CHECK(std::abs(cmp.conductivity_pairing) > 1e-8);
  }
  const Conductivity one = make_conductivity(Field::constant(g, 1.0), k);
  CHECK(dn_comparison_gap(one, k, mask, window_data(mask.window("W1")), window_data(mask.window("W2"))).gap <= 1e-14);

  // data touching supp(m): m lives in the interior here, so put m outside instead
  const Conductivity outside = make_conductivity(bump_field(g, 2.0, 0.5, 0.5, 1.0), k);
  Field f = Field::zeros(g);
  f[g.nearest_index(Point(2.0, 0.0))] = 1.0;
  try {
    dn_comparison_gap(outside, k, mask, f, window_data(mask.window("W2")));
    FAIL("expected a support violation");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find(std::to_string(g.nearest_index(Point(2.0, 0.0)))) != std::string::npos);
  }
}

TEST_CASE("nonuniqueness construction") {
  const Grid g(1, 16.0, 64);
  const DomainMask mask = testing::interval_mask(g, -1.0, 1.0, {{"W1", testing::interval(2.0, 3.0)}, {"W2", testing::interval(-3.0, -2.0)}});
  const OperatorKernel k = OperatorKernel::kernel(g, 0.4);
  const Conductivity c1 = make_conductivity(bump_field(g, 0.0, 0.8, 0.3, 1.0), k);

  const Conductivity same = nonuniqueness_pair(c1, k, mask, Field::zeros(g));
  CHECK(max_abs(Vector(same.gamma.values() - c1.gamma.values())) <= 1e-14);

  const Field m0 = mask.restrict_to_exterior(bump_field(g, 4.5, 1.0, 0.2, 0.0));
  const Conductivity c2 = nonuniqueness_pair(c1, k, mask, m0);
  for (Index i : mask.interior()) CHECK(std::abs(c1.q[i] - c2.q[i]) <= 1e-10);
  CHECK(max_abs(Vector(c1.gamma.values() - c2.gamma.values())) > 0.01);

  const DNMap d1 = assemble_dn(conductivity_form(k, c1.gamma), mask);
  const DNMap d2 = assemble_dn(conductivity_form(k, c2.gamma), mask);
  const IndexList& w1 = mask.window("W1");
  const IndexList& w2 = mask.window("W2");
  CHECK(window_equal(d1, d2, w1, w2, 1e-9));
  CHECK(window_equal(d1, d2, w2, w1, 1e-9));
  CHECK_FALSE(window_equal(d1, d2, w1, w1, 1e-6));

  CHECK_THROWS_AS(nonuniqueness_pair(c1, k, mask, mask.restrict_to_exterior(bump_field(g, 2.5, 1.0, 0.2, 0.0))), DomainError);
  CHECK_THROWS_AS(nonuniqueness_pair(c1, k, mask, mask.restrict_to_exterior(bump_field(g, 5.0, 1.0, 2.5, 0.0))), NumericalError);
}

TEST_CASE("reconstruction") {
  const Grid g(1, 32.0, 128);
  const DomainMask mask = testing::interval_mask(g, -1.0, 1.0);
  const OperatorKernel k = OperatorKernel::kernel(g, 0.4);

  const ReconstructionResult flat = reconstruct_conductivity(assemble_dn(dirichlet_form(k), mask), k);
  CHECK(max_abs(Vector(flat.gamma.values().array() - 1.0)) <= 1e-8);
  CHECK(max_abs(flat.q.values()) <= 1e-8);

  const Field gamma = bump_field(g, 0.1, 0.8, 0.3, 1.0);
  const DNMap data = assemble_dn(conductivity_form(k, gamma), mask);
  const ReconstructionResult r = reconstruct_conductivity(data, k);
  CHECK(max_abs(Vector(r.gamma.values() - gamma.values())) <= 1e-6);
  CHECK_FALSE(r.low_confidence);
  for (Index e : mask.exterior()) CHECK(r.gamma[e] == 1.0);

  // sensitivity is recorded, not asserted
  DNMap noisy = data;
  Rng rng(47);
  const double scale = max_abs(data.matrix);
  for (Index j = 0; j < noisy.matrix.cols(); ++j) {
    for (Index i = 0; i <= j; ++i) {
      const double d = 1e-6 * scale * rng.uniform();
      noisy.matrix(i, j) += d;
      if (i != j) noisy.matrix(j, i) += d;
    }
  }
  try {
    const ReconstructionResult rn = reconstruct_conductivity(noisy, k);
    MESSAGE("noise 1e-6: max error " << max_abs(Vector(rn.gamma.values() - gamma.values())));
    CHECK(std::isfinite(rn.fit_residual));
  } catch (const NumericalError& e) {
    MESSAGE("noise 1e-6: " << e.what());
  }

  DNMap wrong = data;
  wrong.matrix = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(reconstruct_conductivity(wrong, k), DomainError);
}

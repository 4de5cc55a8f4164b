#include "helpers.hpp"

#include <doctest.h>

#include <numbers>

using namespace fraccald;
using fraccald::testing::interval;

TEST_CASE("grid construction and wavenumbers") {
  const Grid g = make_grid(1, 2.0 * std::numbers::pi, 16);
  CHECK(g.spacing() == doctest::Approx(2.0 * std::numbers::pi / 16).epsilon(1e-15));
  CHECK(g.spacing() * g.points_per_dim() == g.extent());
  std::vector<double> ks;
  for (Index b = 0; b < g.points_per_dim(); ++b) ks.push_back(g.wavenumber(b));
  std::sort(ks.begin(), ks.end());
  for (int m = -8; m < 8; ++m) CHECK(ks[static_cast<std::size_t>(m + 8)] == doctest::Approx(m).epsilon(1e-14));

  const Grid g2 = make_grid(2, 4.0, 8);
  CHECK(g2.size() == 64);
  CHECK(g2.spacing() == 0.5);
  CHECK(g2.cell_volume() == 0.25);
}

TEST_CASE("grid rejects invalid shapes") {
  CHECK_THROWS_AS(make_grid(1, 1.0, 10), DomainError);
  CHECK_THROWS_AS(make_grid(1, 1.0, 4), DomainError);
  CHECK_THROWS_AS(make_grid(3, 1.0, 8), DomainError);
  CHECK_THROWS_AS(make_grid(1, -1.0, 8), DomainError);
}

TEST_CASE("index round trip") {
  for (int dim : {1, 2}) {
    const Grid g(dim, 3.0, 16);
    for (Index i = 0; i < g.size(); ++i) {
      CHECK(g.linear_index(g.multi_index(i)) == i);
      CHECK(g.nearest_index(g.coordinate(i)) == i);
    }
  }
  const Grid g(2, 4.0, 8);
  CHECK(g.coordinate(0)[0] == -2.0);
  CHECK(g.coordinate(1)[1] == -1.5);  // row-major: last axis fastest
}

TEST_CASE("inner products") {
  const Grid g(1, 2.0 * std::numbers::pi, 16);
  const Field one = Field::constant(g, 1.0);
  CHECK(inner(one, one) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  const Field s = Field::from_function(g, [](const Point& p) { return std::sin(p[0]); });
  const Field c = Field::from_function(g, [](const Point& p) { return std::cos(p[0]); });
  CHECK(std::abs(inner(s, c)) < 1e-12);
  CHECK(std::abs(inner(s, s) - std::numbers::pi) < 1e-10);
  CHECK_THROWS_AS(inner(s, Field::zeros(Grid(1, 2.0 * std::numbers::pi, 32))), DomainError);

  Rng rng(3);
  const Field a = rng.noise(g);
  const Field b = rng.noise(g);
  const Field d = rng.noise(g);
  CHECK(inner(a, b) == inner(b, a));
  Field ab = a;
  ab.values() = 2.0 * a.values() + d.values();
  CHECK(std::abs(inner(ab, b) - 2.0 * inner(a, b) - inner(d, b)) < 1e-13);
}

TEST_CASE("field entries must be finite") {
  const Grid g(1, 1.0, 8);
  Vector v = Vector::Zero(8);
  v[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(Field(g, v), DomainError);
  CHECK_THROWS_AS(Field(g, Vector::Zero(7)), DomainError);
}

TEST_CASE("mask partition and windows") {
  const Grid g(1, 8.0, 64);
  const DomainMask m = mask_from_predicate(g, interval(-1, 1), {{"W1", interval(2, 3)}, {"W2", interval(2, 3)}});
  CHECK(m.interior().size() + m.exterior().size() == static_cast<std::size_t>(g.size()));
  for (Index i : m.interior()) CHECK(std::abs(g.coordinate(i)[0]) < 1.0);
  for (Index i : m.exterior()) CHECK(std::abs(g.coordinate(i)[0]) >= 1.0);
  CHECK(std::is_sorted(m.interior().begin(), m.interior().end()));
  CHECK(m.window("W1") == m.window("W2"));  // overlap permitted
  for (Index i : m.window("W1")) CHECK_FALSE(m.is_interior(i));
  CHECK_THROWS(m.window("W3"));
}

TEST_CASE("mask contract cases") {
  const Grid g(1, 8.0, 64);
  CHECK_THROWS_AS(mask_from_predicate(g, [](const Point&) { return true; }), DomainError);
  CHECK_THROWS_AS(mask_from_predicate(g, [](const Point&) { return false; }), DomainError);
  CHECK_THROWS_AS(mask_from_predicate(g, interval(-1, 1), {{"W", interval(-0.5, 0.5)}}), DomainError);
}

TEST_CASE("mask windows are intersected with the exterior") {
  const Grid g(1, 8.0, 64);
  const DomainMask m = mask_from_predicate(g, interval(-1, 1), {{"W", interval(0.5, 2.0)}});
  for (Index i : m.window("W")) {
    CHECK_FALSE(m.is_interior(i));
    CHECK(g.coordinate(i)[0] >= 1.0);
  }
}

#include "fraccald/spectral.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <numbers>

using namespace fraccald;

TEST_CASE("transform round trip") {
  for (int dim : {1, 2}) {
    const Grid g(dim, 5.0, 16);
    Rng rng(dim);
    const Field u = rng.noise(g);
    const Vector back = spectral::inverse_real(g, spectral::forward(g, u.values()));
    CHECK(testing::max_abs(Vector(back - u.values())) < 1e-14);
  }
}

TEST_CASE("forward transform of a plane wave is a single pair of bins") {
  const Grid g(1, 2.0 * std::numbers::pi, 16);
  const Field u = Field::from_function(g, [](const Point& p) { return std::cos(3.0 * p[0]); });
  const auto c = spectral::forward(g, u.values());
  for (Index b = 0; b < 16; ++b) {
    const double expect = std::abs(g.signed_mode(b)) == 3 ? 8.0 : 0.0;
    CHECK(std::abs(std::abs(c[b]) - expect) < 1e-12);
  }
}

TEST_CASE("circulant operator reproduces the multiplier") {
  const Grid g(2, 4.0, 8);
  const Vector sym = spectral::power_symbol(g, 0.7);
  const auto op = spectral::CirculantOperator::from_even_symbol(g, sym);
  IndexList all(static_cast<std::size_t>(g.size()));
  std::iota(all.begin(), all.end(), Index{0});
  const Matrix a = op.block(all, all);
  CHECK(testing::max_abs(Matrix(a - a.transpose())) == 0.0);
  Rng rng(5);
  const Field u = rng.noise(g);
  const Vector direct = spectral::apply(g, sym, u.values());
  CHECK(testing::max_abs(Vector(a * u.values() - direct)) < 1e-12);
}

TEST_CASE("derivative symbols") {
  const Grid g(1, 2.0 * std::numbers::pi, 32);
  const Field u = Field::from_function(g, [](const Point& p) { return std::sin(2.0 * p[0]); });
  const Vector du = spectral::apply(g, spectral::derivative_symbol(g, {1, 0}), u.values());
  const Field expect = Field::from_function(g, [](const Point& p) { return 2.0 * std::cos(2.0 * p[0]); });
  CHECK(testing::max_abs(Vector(du - expect.values())) < 1e-12);
  // odd-order Nyquist mode is dropped so real fields stay real
  const Field nyq = Field::from_function(g, [](const Point& p) { return std::cos(16.0 * p[0]); });
  CHECK(testing::max_abs(spectral::apply(g, spectral::derivative_symbol(g, {1, 0}), nyq.values())) < 1e-12);
}

TEST_CASE("bessel symbol") {
  const Grid g(1, 3.0, 16);
  const Vector b = spectral::bessel_symbol(g, 1.2);
  CHECK(b[0] == 1.0);
  CHECK(b.minCoeff() >= 1.0);
}

#pragma once

#include "fraccald/grid.hpp"

#include <complex>
#include <functional>

namespace fraccald::spectral {

using ComplexVector = Eigen::VectorXcd;
using WaveVector = Eigen::Vector2d;

/// Unnormalized forward DFT over all grid axes.
ComplexVector forward(const Grid& grid, const Vector& values);
/// Inverse DFT (scaled by 1/N^dim), real part.
Vector inverse_real(const Grid& grid, const ComplexVector& coeffs);

/// Tabulates sigma(k) over FFT bins; k has zero second component in 1-d.
Vector real_symbol(const Grid& grid, const std::function<double(const WaveVector&)>& sigma);
ComplexVector complex_symbol(const Grid& grid,
                             const std::function<std::complex<double>(const WaveVector&)>& sigma);

Vector apply(const Grid& grid, const Vector& symbol, const Vector& values);
Vector apply(const Grid& grid, const ComplexVector& symbol, const Vector& values);

/// Symbol |k|^power (0^0 = 1).
Vector power_symbol(const Grid& grid, double power);
/// Symbol (1 + |k|^2)^(power/2).
Vector bessel_symbol(const Grid& grid, double power);
/// Symbol (i k)^alpha with odd-order Nyquist modes zeroed so the operator stays real.
ComplexVector derivative_symbol(const Grid& grid, const std::array<int, 2>& alpha);

/**
 * Translation-invariant operator on the torus stored through its generator
 * (the image of the point mass at index 0). Dense blocks are read off the
 * generator by periodic index differences.
 */
class CirculantOperator {
 public:
  /// Real even symbol; the generator is symmetrized so blocks are exactly symmetric.
  static CirculantOperator from_even_symbol(const Grid& grid, const Vector& symbol);
  static CirculantOperator from_symbol(const Grid& grid, const ComplexVector& symbol);
  static CirculantOperator identity(const Grid& grid);
  static CirculantOperator from_generator(const Grid& grid, Vector generator);

  const Grid& grid() const { return grid_; }
  const Vector& generator() const { return generator_; }
  double entry(Index row, Index col) const;
  Matrix block(const IndexList& rows, const IndexList& cols) const;

 private:
  CirculantOperator(const Grid& grid, Vector generator);
  Grid grid_;
  Vector generator_;
};

/// Linear index of the periodic difference a - b.
Index periodic_offset(const Grid& grid, Index a, Index b);

}  // namespace fraccald::spectral

#pragma once

#include "fraccald/spectral.hpp"

#include <memory>
#include <string>

namespace fraccald {

/// Normalization constant C_{n,s} of the singular-integral fractional Laplacian, 0 < s < 1.
double frac_constant(int n, double s);

/// Hurwitz zeta function sum_{k>=0} (q + k)^(-a), for a > 1 and q > 0.
double hurwitz_zeta(double a, double q);

/**
 * Lattice sum  sum_{j in Z^dim} |d + j L|^(-exponent)  for every nonzero periodic
 * offset d of the grid, indexed by linear offset; entry 0 is zero.
 * This is the torus version of the radial kernel |x - y|^(-exponent).
 */
Vector periodic_kernel_sums(const Grid& grid, double exponent);

enum class Flavor { spectral, kernel };

std::string to_string(Flavor f);
Flavor flavor_from_string(const std::string& name);

/**
 * Discrete fractional Laplacian (-Delta)^s on the torus.
 *
 * spectral: Fourier multiplier |k|^{2s}, any s > 0.
 * kernel:   v(x) = sum_y W(x,y) (u(x) - u(y)) with
 *           W(x,y) = C_{n,s} h^n sum_j |x - y + jL|^{-(n+2s)},  0 < s < 1.
 *           The diagonal of the matrix is the off-diagonal row sum, so constants
 *           are annihilated exactly.
 */
class OperatorKernel {
 public:
  static OperatorKernel spectral(const Grid& grid, double order);
  static OperatorKernel kernel(const Grid& grid, double order);

  const Grid& grid() const { return grid_; }
  double order() const { return order_; }
  Flavor flavor() const { return flavor_; }

  /// Off-diagonal weight W(x,y) (kernel flavor only; zero when x == y).
  double weight(Index x, Index y) const;
  /// Weights by linear periodic offset (kernel flavor only).
  const Vector& weights() const;
  /// Multiplier |k|^{2s} by FFT bin (spectral flavor only).
  const Vector& symbol() const;

  /// Matrix entries of the operator for the given row/column index sets.
  Matrix block(const IndexList& rows, const IndexList& cols) const;
  /// Full N^dim x N^dim matrix; throws ResourceLimitError above the dense cap.
  Matrix dense() const;

 private:
  OperatorKernel(const Grid& grid, double order, Flavor flavor);

  Grid grid_;
  double order_;
  Flavor flavor_;
  Vector symbol_;
  Vector weights_;
  std::shared_ptr<const spectral::CirculantOperator> matrix_;
};

/// (-Delta)^s u, or (-Delta)^{s/2} u when half is set (spectral flavor only).
Field frac_laplacian(const OperatorKernel& kernel, const Field& u, bool half = false);

/// Discrete Dirichlet energy (h^n / 2) sum_{x,y} W(x,y)(u(x)-u(y))(v(x)-v(y)).
double frac_gradient_pairing(const OperatorKernel& kernel, const Field& u, const Field& v);

/**
 * Normalized Gagliardo seminorm
 *   [u]_{s,p} = ( C/2 * sum_{x != y} |u(x)-u(y)|^p K_{n+sp}(x-y) h^{2n} )^{1/p},
 * with K the periodized radial kernel. C = C_{n,s} for p = 2, otherwise 1.
 */
double gagliardo_seminorm(const Grid& grid, const Field& u, double s, double p);

/// Bessel potential <D>^s with symbol (1 + |k|^2)^{s/2}.
class BesselMultiplier {
 public:
  BesselMultiplier(const Grid& grid, double order);
  const Grid& grid() const { return grid_; }
  double order() const { return order_; }
  const Vector& symbol() const { return symbol_; }
  Field apply(const Field& u) const;

 private:
  Grid grid_;
  double order_;
  Vector symbol_;
};

/// ||<D>^s u||_{L^2}.
double sobolev_norm(const BesselMultiplier& bessel, const Field& u);

/// Gram matrix h^n (<D>^{2s})_{rows,cols} of the H^s inner product.
Matrix sobolev_gram(const Grid& grid, double order, const IndexList& rows, const IndexList& cols);

}  // namespace fraccald

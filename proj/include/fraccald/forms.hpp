#pragma once

#include "fraccald/fracops.hpp"

#include <map>
#include <memory>
#include <string>

namespace fraccald {

/// Provenance of an assembled form: family name plus scalar parameters.
struct FormDescriptor {
  std::string kind;  // dirichlet, potential, pdo, conductivity, sum, adjoint
  std::map<std::string, double> params;

  std::string describe() const;
};

/**
 * Bilinear form on grid functions stored as a dense matrix M with
 *   B(u, v) = v^T M u.
 * Quadrature weights are folded into M, so the Dirichlet form of K has
 * M = h^n K and B(u, v) = inner(K u, v). Copies share the matrix.
 */
class BilinearForm {
 public:
  BilinearForm(const Grid& grid, Matrix matrix, double order, bool symmetric, FormDescriptor descriptor);

  const Grid& grid() const { return grid_; }
  const Matrix& matrix() const { return *matrix_; }
  /// Sobolev order s of the energy space H^s on which the form is coercive.
  double order() const { return order_; }
  bool symmetric() const { return symmetric_; }
  const FormDescriptor& descriptor() const { return descriptor_; }

  double operator()(const Field& u, const Field& v) const;

 private:
  Grid grid_;
  std::shared_ptr<const Matrix> matrix_;
  double order_;
  bool symmetric_;
  FormDescriptor descriptor_;
};

double evaluate(const BilinearForm& form, const Field& u, const Field& v);
/// B*(u, v) = B(v, u).
BilinearForm adjoint(const BilinearForm& form);
/// Sum of forms; the order is the larger of the two.
BilinearForm operator+(const BilinearForm& a, const BilinearForm& b);
BilinearForm operator-(const BilinearForm& a, const BilinearForm& b);
/// max |M - M^T| / max |M| (0 for the zero form).
double symmetry_defect(const BilinearForm& form);
/// Spectral norm of M by power iteration on M^T M.
double norm_estimate(const BilinearForm& form, int iterations = 200);

BilinearForm dirichlet_form(const OperatorKernel& kernel);
/// q(u, v) = h^n sum q_i u_i v_i.
BilinearForm potential_form(const Grid& grid, const Field& q);

using MultiIndexAlpha = std::array<int, 2>;

/// Differential operator P = sum_{|alpha| <= m} a_alpha D^alpha with grid-function coefficients.
class PdoSpec {
 public:
  PdoSpec(int order, std::map<MultiIndexAlpha, Field> coefficients);
  int order() const { return order_; }
  const std::map<MultiIndexAlpha, Field>& coefficients() const { return coefficients_; }

 private:
  int order_;
  std::map<MultiIndexAlpha, Field> coefficients_;
};

/// B_P(v, w) = <(-Delta)^{s/2} v, (-Delta)^{s/2} w> + sum_alpha <a_alpha D^alpha v, w>. Requires m < 2s.
BilinearForm pdo_form(const OperatorKernel& kernel, const PdoSpec& pdo);

/**
 * B_gamma(u, v) = (h^n / 2) sum_{x,y} W(x,y) a(x) a(y) (u(x)-u(y)) (v(x)-v(y)),
 * a = gamma^{1/2}, assembled from the kernel-flavor weights.
 */
BilinearForm conductivity_form(const OperatorKernel& kernel, const Field& gamma);

/// Smallness budget (2^{-s/2} / (1 + C))^2.
double delta_budget(double c_poincare, double s);

/// H^s Gram matrix restricted to the interior of the mask.
Matrix hs_gram(const DomainMask& mask, double order);

/**
 * Smallest generalized eigenvalue of sym(M)_II x = lambda G_II x with G the
 * H^s Gram matrix of the form's order. Positive values certify coercivity on
 * interior-supported fields.
 */
double coercivity_margin(const BilinearForm& form, const DomainMask& mask);

/**
 * Grid surrogate for the multiplier norm of a from H^r to H^{-t}:
 * the spectral norm of <D>^{-t} a <D>^{-r}. It bounds the continuum
 * multiplier norm from below.
 */
double multiplier_norm(const Field& a, double r, double t, int iterations = 100);

}  // namespace fraccald

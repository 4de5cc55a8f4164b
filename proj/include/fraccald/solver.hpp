#pragma once

#include "fraccald/forms.hpp"

#include <Eigen/LU>

#include <optional>

namespace fraccald {

/**
 * B(u, phi) = F(phi) for interior-supported phi, with u = f on the exterior.
 * Only exterior values of f are read. The interior source holds the
 * functional values F(e_i) on interior indices; it defaults to zero.
 */
struct ExteriorProblem {
  BilinearForm form;
  DomainMask mask;
  Field exterior_data;
  std::optional<Field> interior_source;
};

struct Solution {
  Field u;
  /// max |A_II u_I + A_IE f_E - F_I| relative to max(|f_E|, |F_I|).
  double residual;
  bool exterior_match;
};

/**
 * Factorizes the interior block A_II once for a (form, mask) pair and then
 * serves forward and adjoint exterior solves. Construction refuses forms whose
 * coercivity margin is not positive.
 */
class ExteriorSolver {
 public:
  ExteriorSolver(const BilinearForm& form, const DomainMask& mask);

  const BilinearForm& form() const { return form_; }
  const DomainMask& mask() const { return mask_; }
  double margin() const { return margin_; }

  Solution solve(const Field& f, const std::optional<Field>& source = std::nullopt) const;
  Solution solve_adjoint(const Field& f, const std::optional<Field>& source = std::nullopt) const;

  /// Interior values -A_II^{-1} A_IE for all exterior indicator data (|I| x |E|).
  Matrix interior_response() const;

 private:
  Solution solve_impl(const Field& f, const std::optional<Field>& source, bool transposed) const;

  BilinearForm form_;
  DomainMask mask_;
  double margin_;
  Matrix a_ii_;
  Matrix a_ie_;
  Matrix a_ei_;
  Eigen::PartialPivLU<Matrix> lu_;
};

Solution solve_exterior(const ExteriorProblem& p);
Solution solve_adjoint(const ExteriorProblem& p);

/**
 * Relative H^s residuals of the best approximation of an interior-supported
 * target by span{u_{f_j} - f_j : j < k}, k = 1..n_sources, where f_j is the
 * indicator of the j-th source point. Entry k-1 belongs to k sources.
 */
std::vector<double> runge_profile(const BilinearForm& form, const DomainMask& mask, const IndexList& source_window,
                                  const Field& target, Index n_sources);

double runge_residual(const BilinearForm& form, const DomainMask& mask, const IndexList& source_window,
                      const Field& target, Index n_sources);

}  // namespace fraccald

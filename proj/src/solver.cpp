#include "fraccald/solver.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace fraccald {

ExteriorSolver::ExteriorSolver(const BilinearForm& form, const DomainMask& mask)
    : form_(form), mask_(mask), margin_(0.0) {
  require_same_grid(form.grid(), mask.grid());
  margin_ = coercivity_margin(form_, mask_);
  if (!(margin_ > 0.0)) {
    std::ostringstream os;
    os << "form " << form_.descriptor().describe() << " is not coercive on the interior (margin " << margin_ << ")";
    throw NotCoerciveError(os.str(), margin_);
  }
  const Matrix& m = form_.matrix();
  a_ii_ = gather(m, mask_.interior(), mask_.interior());
  a_ie_ = gather(m, mask_.interior(), mask_.exterior());
  a_ei_ = gather(m, mask_.exterior(), mask_.interior());
  lu_.compute(a_ii_);
  if (!(lu_.rcond() > 1e-15)) throw NumericalError("interior block is numerically singular");
}

Solution ExteriorSolver::solve(const Field& f, const std::optional<Field>& source) const {
  return solve_impl(f, source, false);
}

Solution ExteriorSolver::solve_adjoint(const Field& f, const std::optional<Field>& source) const {
  return solve_impl(f, source, true);
}

Solution ExteriorSolver::solve_impl(const Field& f, const std::optional<Field>& source, bool transposed) const {
  require_same_grid(form_.grid(), f.grid());
  const Vector fe = gather(f.values(), mask_.exterior());
  Vector rhs = Vector::Zero(static_cast<Index>(mask_.interior().size()));
  if (source) {
    require_same_grid(form_.grid(), source->grid());
    rhs = gather(source->values(), mask_.interior());
  }
  const Vector fi = rhs;
  // The adjoint form has matrix M^T, so its interior/exterior coupling is A_EI^T.
  const Vector coupling = transposed ? Vector(a_ei_.transpose() * fe) : Vector(a_ie_ * fe);
  rhs -= coupling;
  const Vector ui = transposed ? Vector(lu_.transpose().solve(rhs)) : Vector(lu_.solve(rhs));

  Vector u = f.values();
  for (std::size_t k = 0; k < mask_.interior().size(); ++k) u[mask_.interior()[k]] = ui[static_cast<Index>(k)];

  const Vector lhs = transposed ? Vector(a_ii_.transpose() * ui) : Vector(a_ii_ * ui);
  const double res_abs = (lhs + coupling - fi).cwiseAbs().maxCoeff();
  double scale = fe.size() > 0 ? fe.cwiseAbs().maxCoeff() : 0.0;
  if (fi.size() > 0) scale = std::max(scale, fi.cwiseAbs().maxCoeff());
  const double residual = scale > 0.0 ? res_abs / scale : res_abs;

  bool match = true;
  for (Index e : mask_.exterior()) match = match && u[e] == f[e];
  return Solution{Field(form_.grid(), std::move(u)), residual, match};
}

Matrix ExteriorSolver::interior_response() const { return -lu_.solve(a_ie_); }

Solution solve_exterior(const ExteriorProblem& p) {
  return ExteriorSolver(p.form, p.mask).solve(p.exterior_data, p.interior_source);
}

Solution solve_adjoint(const ExteriorProblem& p) {
  return ExteriorSolver(p.form, p.mask).solve_adjoint(p.exterior_data, p.interior_source);
}

std::vector<double> runge_profile(const BilinearForm& form, const DomainMask& mask, const IndexList& source_window,
                                  const Field& target, Index n_sources) {
  if (source_window.empty()) throw DomainError("Runge source window is empty");
  if (n_sources < 1 || n_sources > static_cast<Index>(source_window.size())) {
    throw DomainError("n_sources must lie between 1 and the window size");
  }
  require_same_grid(form.grid(), target.grid());
  for (Index e : mask.exterior()) {
    if (target[e] != 0.0) throw DomainError("Runge target must vanish outside the interior");
  }
  for (Index w : source_window) {
    if (mask.is_interior(w)) throw DomainError("Runge source window contains an interior index");
  }

  const ExteriorSolver solver(form, mask);
  const Matrix gram = hs_gram(mask, form.order());
  const Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("H^s Gram matrix is not positive definite");
  const Matrix ut = llt.matrixU();  // G = U^T U, so ||x||_G = ||U x||

  Vector r = ut * gather(target.values(), mask.interior());
  const double target_norm = r.norm();
  if (target_norm == 0.0) throw DomainError("Runge target is zero");

  // Nested least squares by modified Gram-Schmidt with one reorthogonalization pass.
  std::vector<Vector> basis;
  std::vector<double> out;
  for (Index j = 0; j < n_sources; ++j) {
    Field f = Field::zeros(form.grid());
    f[source_window[static_cast<std::size_t>(j)]] = 1.0;
    const Solution sol = solver.solve(f);
    Vector b = ut * gather(sol.u.values(), mask.interior());
    const double original = b.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : basis) b -= q.dot(b) * q;
    }
    const double nb = b.norm();
    if (nb > 1e-13 * original && nb > 0.0) {
      b /= nb;
      r -= b.dot(r) * b;
      basis.push_back(std::move(b));
    }
    out.push_back(r.norm() / target_norm);
  }
  return out;
}

double runge_residual(const BilinearForm& form, const DomainMask& mask, const IndexList& source_window,
                      const Field& target, Index n_sources) {
  return runge_profile(form, mask, source_window, target, n_sources).back();
}

}  // namespace fraccald

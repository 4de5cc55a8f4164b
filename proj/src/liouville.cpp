#include "fraccald/liouville.hpp"

#include <cmath>
#include <sstream>

namespace fraccald {

namespace {

void require_kernel_flavor(const OperatorKernel& kernel) {
  if (kernel.flavor() != Flavor::kernel) throw DomainError("Liouville computations require the kernel flavor");
}

// (h^n / 2) sum_{x != y} W(x,y) c(x,y) (u(x)-u(y)) (v(x)-v(y)) with c = a(x) a(y) or 1.
double energy(const OperatorKernel& kernel, const Vector& u, const Vector& v, const Vector* a) {
  const Grid& g = kernel.grid();
  double acc = 0.0;
  for (Index x = 0; x < g.size(); ++x) {
    double row = 0.0;
    for (Index y = 0; y < g.size(); ++y) {
      if (y == x) continue;
      double w = kernel.weight(x, y);
      if (a) w *= (*a)[x] * (*a)[y];
      row += w * (u[x] - u[y]) * (v[x] - v[y]);
    }
    acc += row;
  }
  return 0.5 * g.cell_volume() * acc;
}

IndexList support(const Field& f) {
  IndexList out;
  for (Index i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) out.push_back(i);
  }
  return out;
}

}  // namespace

Conductivity make_conductivity(const Field& gamma, const OperatorKernel& kernel) {
  require_kernel_flavor(kernel);
  require_same_grid(kernel.grid(), gamma.grid());
  const double gamma0 = gamma.values().minCoeff();
  if (!(gamma0 > 0.0)) throw DomainError("conductivity must be strictly positive");
  const Grid& g = gamma.grid();
  Field a(g, gamma.values().cwiseSqrt());
  Field m(g, a.values().array() - 1.0);
  const Field km = frac_laplacian(kernel, m);
  Field q(g, -(km.values().array() / a.values().array()).matrix());
  return Conductivity{gamma, std::move(a), std::move(m), std::move(q), gamma0};
}

BilinearForm schrodinger_form(const Conductivity& c, const OperatorKernel& kernel) {
  require_kernel_flavor(kernel);
  return dirichlet_form(kernel) + potential_form(kernel.grid(), c.q);
}

LiouvilleGap liouville_identity_gap(const Conductivity& c, const OperatorKernel& kernel, const Field& u,
                                    const Field& phi) {
  require_kernel_flavor(kernel);
  require_same_grid(kernel.grid(), u.grid());
  require_same_grid(kernel.grid(), phi.grid());
  const Vector& a = c.sqrt_gamma.values();
  const Vector au = a.cwiseProduct(u.values());
  const Vector aphi = a.cwiseProduct(phi.values());
  const double lhs = energy(kernel, u.values(), phi.values(), &a);
  const double e = energy(kernel, au, aphi, nullptr);
  const double pot = kernel.grid().cell_volume() * c.q.values().cwiseProduct(au).dot(aphi);
  const double rhs = e + pot;
  const double scale = std::abs(lhs) + std::abs(e) + std::abs(pot);
  return LiouvilleGap{lhs, rhs, scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0};
}

Field transform(const Conductivity& c, const Field& u, Direction direction) {
  require_same_grid(c.gamma.grid(), u.grid());
  if (direction == Direction::to_schrodinger) return Field(u.grid(), c.sqrt_gamma.values().cwiseProduct(u.values()));
  return Field(u.grid(), u.values().cwiseQuotient(c.sqrt_gamma.values()));
}

DnComparison dn_comparison_gap(const Conductivity& c, const OperatorKernel& kernel, const DomainMask& mask,
                               const Field& f, const Field& g) {
  require_kernel_flavor(kernel);
  std::vector<char> in_m(static_cast<std::size_t>(c.m.size()), 0);
  for (Index i : support(c.m)) in_m[static_cast<std::size_t>(i)] = 1;
  IndexList offending;
  for (const Field* h : {&f, &g}) {
    for (Index i : support(*h)) {
      if (in_m[static_cast<std::size_t>(i)] || mask.is_interior(i)) offending.push_back(i);
    }
  }
  if (!offending.empty()) {
    std::ostringstream os;
    os << "exterior data overlaps the support of m or the interior at indices";
    for (std::size_t k = 0; k < offending.size() && k < 16; ++k) os << ' ' << offending[k];
    if (offending.size() > 16) os << " ...";
    throw DomainError(os.str());
  }
  const BilinearForm bg = conductivity_form(kernel, c.gamma);
  const BilinearForm bq = schrodinger_form(c, kernel);
  const double lg = bg(ExteriorSolver(bg, mask).solve(f).u, g);
  const double lq = bq(ExteriorSolver(bq, mask).solve(f).u, g);
  const double scale = std::max({1.0, std::abs(lg), std::abs(lq)});
  return DnComparison{lg, lq, std::abs(lg - lq) / scale};
}

Conductivity nonuniqueness_pair(const Conductivity& c1, const OperatorKernel& kernel, const DomainMask& mask,
                                const Field& m0_exterior) {
  require_kernel_flavor(kernel);
  const Grid& g = kernel.grid();
  require_same_grid(g, m0_exterior.grid());
  for (const auto& [name, idx] : mask.windows()) {
    for (Index i : idx) {
      if (m0_exterior[i] != 0.0) {
        throw DomainError("m0 must vanish on window '" + name + "', nonzero at index " + std::to_string(i));
      }
    }
  }
  const IndexList& in = mask.interior();
  const IndexList& ex = mask.exterior();
  Matrix a_ii = kernel.block(in, in);
  a_ii.diagonal() += gather(c1.q.values(), in);
  const Matrix a_ie = kernel.block(in, ex);
  const Eigen::PartialPivLU<Matrix> lu(a_ii);
  if (!(lu.rcond() > 1e-12)) throw NumericalError("interior operator K + q_1 is near singular");
  const Vector m_i = lu.solve(-a_ie * gather(m0_exterior.values(), ex));

  Vector m = Vector::Zero(g.size());
  for (Index e : ex) m[e] = m0_exterior[e];
  for (std::size_t k = 0; k < in.size(); ++k) m[in[k]] = m_i[static_cast<Index>(k)];
  const Vector a2 = c1.sqrt_gamma.values() - m;
  if (!(a2.minCoeff() > 0.0)) throw NumericalError("constructed conductivity loses positivity");
  const Field gamma2(g, a2.cwiseProduct(a2));
  if (gamma2.values().minCoeff() < 0.5 * c1.gamma0) {
    throw NumericalError("constructed conductivity drops below gamma_0 / 2");
  }
  return make_conductivity(gamma2, kernel);
}

ReconstructionResult reconstruct_conductivity(const DNMap& dn_data, const OperatorKernel& kernel,
                                              const ReconstructionOptions& options) {
  require_kernel_flavor(kernel);
  const DomainMask& mask = dn_data.mask;
  const Grid& g = kernel.grid();
  require_same_grid(g, mask.grid());
  const IndexList& in = mask.interior();
  const IndexList& ex = mask.exterior();
  const auto ni = static_cast<Index>(in.size());
  const auto ne = static_cast<Index>(ex.size());
  if (dn_data.matrix.rows() != ne || dn_data.matrix.cols() != ne) throw DomainError("DN data does not match the mask");
  const double h = g.cell_volume();

  const Matrix k_ii = kernel.block(in, in);
  const Matrix a_ie = h * kernel.block(in, ex);
  const Matrix a_ee = h * kernel.block(ex, ex);

  // Strict upper triangle of the DN matrix: independent of q on the exterior.
  const Index n_data = ne * (ne - 1) / 2;
  Vector data(n_data);
  {
    Index k = 0;
    for (Index j = 1; j < ne; ++j) {
      for (Index i = 0; i < j; ++i) data[k++] = dn_data.matrix(i, j);
    }
  }
  const double data_norm = std::max(data.norm(), 1e-300);

  auto forward = [&](const Vector& q, Vector& model, Matrix* jac) {
    Matrix a_ii = h * k_ii;
    a_ii.diagonal() += h * q;
    const Eigen::PartialPivLU<Matrix> lu(a_ii);
    const Matrix u = -lu.solve(a_ie);  // interior values of the indicator solutions
    const Matrix lambda = a_ee + a_ie.transpose() * u;
    model.resize(n_data);
    if (jac) jac->resize(n_data, ni);
    Index k = 0;
    for (Index j = 1; j < ne; ++j) {
      for (Index i = 0; i < j; ++i) {
        model[k] = lambda(i, j);
        if (jac) jac->row(k) = h * u.col(i).cwiseProduct(u.col(j)).transpose();
        ++k;
      }
    }
  };

  Vector q = Vector::Zero(ni);
  Vector model;
  Matrix jac;
  forward(q, model, &jac);
  Vector r = model - data;
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const Matrix jtj = jac.transpose() * jac;
    const Vector jtr = jac.transpose() * r;
    const double diag_scale = std::max(jtj.diagonal().maxCoeff(), 1e-300);
    bool improved = false;
    Vector step;
    for (int tries = 0; tries < 30; ++tries) {
      Matrix lhs = jtj;
      lhs.diagonal().array() += std::max(lambda, options.ridge) * diag_scale;
      step = -lhs.ldlt().solve(jtr);
      Vector trial_model;
      forward(q + step, trial_model, nullptr);
      const double trial_cost = (trial_model - data).squaredNorm();
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        q += step;
        improved = true;
        lambda = std::max(lambda / 10.0, options.ridge);
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
    forward(q, model, &jac);
    r = model - data;
    const double new_cost = r.squaredNorm();
    const bool converged = step.norm() <= 1e-14 * (1.0 + q.norm()) || new_cost <= 1e-32 * data_norm * data_norm ||
                           cost - new_cost <= 1e-16 * cost;
    cost = new_cost;
    if (converged) {
      ++it;
      break;
    }
  }
  const double fit = std::sqrt(cost) / data_norm;

  // Stage 2: (K + diag q) m = -q on the interior, m = 0 outside.
  Matrix k_q = k_ii;
  k_q.diagonal() += q;
  const Vector m_i = k_q.partialPivLu().solve(-q);
  Vector m = Vector::Zero(g.size());
  Vector qf = Vector::Zero(g.size());
  for (Index k = 0; k < ni; ++k) {
    m[in[static_cast<std::size_t>(k)]] = m_i[k];
    qf[in[static_cast<std::size_t>(k)]] = q[k];
  }
  const Vector a = Vector::Ones(g.size()) + m;
  if (!(a.minCoeff() > 0.0)) throw NumericalError("reconstructed conductivity loses positivity");
  return ReconstructionResult{Field(g, a.cwiseProduct(a)), Field(g, std::move(qf)), Field(g, std::move(m)), fit,
                              fit > options.confidence_threshold, it};
}

}  // namespace fraccald

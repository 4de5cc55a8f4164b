#include "fraccald/forms.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <sstream>

namespace fraccald {

namespace {

void require_dense_size(const Grid& grid) {
  if (grid.size() > kMaxDenseDofs) {
    throw ResourceLimitError("form with " + std::to_string(grid.size()) +
                             " degrees of freedom exceeds the dense cap of " + std::to_string(kMaxDenseDofs));
  }
}

IndexList all_indices(const Grid& grid) {
  IndexList out(static_cast<std::size_t>(grid.size()));
  for (Index i = 0; i < grid.size(); ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

Vector deterministic_start(Index n) {
  std::mt19937_64 gen(0x5eed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * dist(gen);
  return v.normalized();
}

}  // namespace

std::string FormDescriptor::describe() const {
  std::ostringstream os;
  os << kind;
  if (!params.empty()) {
    os << '(';
    bool first = true;
    for (const auto& [k, v] : params) {
      os << (first ? "" : ", ") << k << '=' << v;
      first = false;
    }
    os << ')';
  }
  return os.str();
}

BilinearForm::BilinearForm(const Grid& grid, Matrix matrix, double order, bool symmetric,
                           FormDescriptor descriptor)
    : grid_(grid),
      matrix_(std::make_shared<const Matrix>(std::move(matrix))),
      order_(order),
      symmetric_(symmetric),
      descriptor_(std::move(descriptor)) {
  if (matrix_->rows() != grid_.size() || matrix_->cols() != grid_.size()) {
    throw DomainError("form matrix does not match the grid size");
  }
  if (!matrix_->allFinite()) throw DomainError("form matrix has non-finite entries");
}

double BilinearForm::operator()(const Field& u, const Field& v) const {
  require_same_grid(grid_, u.grid());
  require_same_grid(grid_, v.grid());
  return v.values().dot(*matrix_ * u.values());
}

double evaluate(const BilinearForm& form, const Field& u, const Field& v) { return form(u, v); }

BilinearForm adjoint(const BilinearForm& form) {
  FormDescriptor d{"adjoint", form.descriptor().params};
  d.kind = form.descriptor().kind + "*";
  return BilinearForm(form.grid(), form.matrix().transpose(), form.order(), form.symmetric(), d);
}

BilinearForm operator+(const BilinearForm& a, const BilinearForm& b) {
  require_same_grid(a.grid(), b.grid());
  FormDescriptor d{a.descriptor().kind + "+" + b.descriptor().kind, {}};
  return BilinearForm(a.grid(), a.matrix() + b.matrix(), std::max(a.order(), b.order()),
                      a.symmetric() && b.symmetric(), d);
}

BilinearForm operator-(const BilinearForm& a, const BilinearForm& b) {
  require_same_grid(a.grid(), b.grid());
  FormDescriptor d{a.descriptor().kind + "-" + b.descriptor().kind, {}};
  return BilinearForm(a.grid(), a.matrix() - b.matrix(), std::max(a.order(), b.order()),
                      a.symmetric() && b.symmetric(), d);
}

double symmetry_defect(const BilinearForm& form) {
  const Matrix& m = form.matrix();
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

double norm_estimate(const BilinearForm& form, int iterations) {
  const Matrix& m = form.matrix();
  Vector v = deterministic_start(m.cols());
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = m.transpose() * (m * v);
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    sigma = std::sqrt(nw);
  }
  return sigma;
}

BilinearForm dirichlet_form(const OperatorKernel& kernel) {
  require_dense_size(kernel.grid());
  FormDescriptor d{"dirichlet", {{"s", kernel.order()}}};
  d.params["kernel_flavor"] = kernel.flavor() == Flavor::kernel ? 1.0 : 0.0;
  return BilinearForm(kernel.grid(), kernel.grid().cell_volume() * kernel.dense(), kernel.order(), true, d);
}

BilinearForm potential_form(const Grid& grid, const Field& q) {
  require_same_grid(grid, q.grid());
  require_dense_size(grid);
  Matrix m = Matrix::Zero(grid.size(), grid.size());
  m.diagonal() = grid.cell_volume() * q.values();
  FormDescriptor d{"potential", {{"max_abs_q", q.values().cwiseAbs().maxCoeff()}}};
  return BilinearForm(grid, std::move(m), 0.0, true, d);
}

PdoSpec::PdoSpec(int order, std::map<MultiIndexAlpha, Field> coefficients)
    : order_(order), coefficients_(std::move(coefficients)) {
  if (order < 0) throw DomainError("differential order must be nonnegative");
  for (const auto& [alpha, a] : coefficients_) {
    if (alpha[0] < 0 || alpha[1] < 0) throw DomainError("multi-index entries must be nonnegative");
    if (alpha[0] + alpha[1] > order_) {
      throw DomainError("multi-index of length " + std::to_string(alpha[0] + alpha[1]) +
                        " exceeds the differential order " + std::to_string(order_));
    }
    if (!a.values().allFinite()) throw DomainError("coefficient field has non-finite entries");
  }
}

BilinearForm pdo_form(const OperatorKernel& kernel, const PdoSpec& pdo) {
  if (kernel.flavor() != Flavor::spectral) throw DomainError("pdo_form requires the spectral flavor");
  if (!(pdo.order() < 2.0 * kernel.order())) {
    throw DomainError("differential order m = " + std::to_string(pdo.order()) +
                      " must be smaller than 2s = " + std::to_string(2.0 * kernel.order()));
  }
  const Grid& g = kernel.grid();
  require_dense_size(g);
  const IndexList all = all_indices(g);
  Matrix m = kernel.dense();
  bool symmetric = true;
  for (const auto& [alpha, a] : pdo.coefficients()) {
    require_same_grid(g, a.grid());
    if (g.dim() == 1 && alpha[1] != 0) throw DomainError("second multi-index entry must be 0 in dimension 1");
    if (alpha[0] == 0 && alpha[1] == 0) {
      m.diagonal() += a.values();
      continue;
    }
    symmetric = false;
    const auto d = spectral::CirculantOperator::from_symbol(g, spectral::derivative_symbol(g, alpha));
    m.noalias() += a.values().asDiagonal() * d.block(all, all);
  }
  FormDescriptor desc{"pdo", {{"s", kernel.order()}, {"m", static_cast<double>(pdo.order())}}};
  return BilinearForm(g, g.cell_volume() * m, kernel.order(), symmetric, desc);
}

BilinearForm conductivity_form(const OperatorKernel& kernel, const Field& gamma) {
  if (kernel.flavor() != Flavor::kernel) throw DomainError("conductivity_form requires the kernel flavor");
  const Grid& g = kernel.grid();
  require_same_grid(g, gamma.grid());
  require_dense_size(g);
  if (!(gamma.values().minCoeff() > 0.0)) throw DomainError("conductivity must be strictly positive");
  const Vector a = gamma.values().cwiseSqrt();
  const double h = g.cell_volume();
  Matrix m(g.size(), g.size());
  for (Index y = 0; y < g.size(); ++y) {
    for (Index x = 0; x < g.size(); ++x) {
      m(x, y) = x == y ? 0.0 : -h * kernel.weight(x, y) * a[x] * a[y];
    }
  }
  for (Index x = 0; x < g.size(); ++x) {
    double acc = 0.0;
    for (Index y = 0; y < g.size(); ++y) {
      if (y != x) acc += kernel.weight(x, y) * a[y];
    }
    m(x, x) = h * a[x] * acc;
  }
  FormDescriptor d{"conductivity",
                   {{"s", kernel.order()}, {"gamma_min", gamma.values().minCoeff()},
                    {"gamma_max", gamma.values().maxCoeff()}}};
  return BilinearForm(g, std::move(m), kernel.order(), true, d);
}

double delta_budget(double c_poincare, double s) {
  if (!(c_poincare > 0.0)) throw DomainError("Poincare constant must be positive");
  const double base = std::pow(2.0, -0.5 * s) / (1.0 + c_poincare);
  return base * base;
}

Matrix hs_gram(const DomainMask& mask, double order) {
  return sobolev_gram(mask.grid(), order, mask.interior(), mask.interior());
}

double coercivity_margin(const BilinearForm& form, const DomainMask& mask) {
  require_same_grid(form.grid(), mask.grid());
  const Matrix a = gather(form.matrix(), mask.interior(), mask.interior());
  const Matrix sym = 0.5 * (a + a.transpose());
  const Matrix gram = hs_gram(mask, form.order());
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(sym, gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("coercivity eigensolve failed");
  return es.eigenvalues().minCoeff();
}

double multiplier_norm(const Field& a, double r, double t, int iterations) {
  const Grid& g = a.grid();
  const Vector smooth_r = spectral::bessel_symbol(g, -r);
  const Vector smooth_t = spectral::bessel_symbol(g, -t);
  auto sandwich = [&](const Vector& first, const Vector& last, const Vector& v) {
    Vector w = spectral::apply(g, first, v);
    w.array() *= a.values().array();
    return spectral::apply(g, last, w);
  };
  Vector v = deterministic_start(g.size());
  double sigma = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Vector w = sandwich(smooth_t, smooth_r, sandwich(smooth_r, smooth_t, v));
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    sigma = std::sqrt(nw);
  }
  return sigma;
}

}  // namespace fraccald

#include "fraccald/fracops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace fraccald {

namespace {

constexpr double kPi = std::numbers::pi;

void require_fractional_order(double s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw DomainError("fractional order must lie in (0,1), got " + std::to_string(s));
  }
}

// Fourier transform at frequency xi of y -> (x^2 + y^2)^(-a/2), for x > 0.
double line_transform(double a, double x, double xi) {
  if (xi == 0.0) {
    return std::pow(x, 1.0 - a) * std::sqrt(kPi) * std::tgamma(0.5 * (a - 1.0)) / std::tgamma(0.5 * a);
  }
  const double nu = 0.5 * (a - 1.0);
  return 2.0 * std::sqrt(kPi) / std::tgamma(0.5 * a) * std::pow(xi / (2.0 * x), nu) *
         std::cyl_bessel_k(nu, x * xi);
}

// sum_{j in Z} (x^2 + (y + jL)^2)^(-a/2) for 0 <= y < L.
double line_sum(double a, double x, double y, double L) {
  x = std::abs(x);
  if (x >= L) {
    // Poisson summation; terms decay like exp(-2 pi k x / L).
    double total = line_transform(a, x, 0.0);
    for (int k = 1; k < 64; ++k) {
      const double xi = 2.0 * kPi * k / L;
      const double mode = 2.0 * line_transform(a, x, xi);
      total += mode * std::cos(xi * y);
      if (mode < 1e-18 * std::abs(total)) break;
    }
    return total / L;
  }
  constexpr int kDirect = 24;
  double total = 0.0;
  for (int j = -kDirect; j <= kDirect; ++j) {
    const double t = y + j * L;
    const double r2 = x * x + t * t;
    if (r2 > 0.0) total += std::pow(r2, -0.5 * a);
  }
  // Far terms: |t|^{-a} (1 + x^2/t^2)^{-a/2} expanded to second order.
  const double q_plus = kDirect + 1 + y / L;
  const double q_minus = kDirect + 1 - y / L;
  const double x2 = x * x / (L * L);
  total += std::pow(L, -a) * (hurwitz_zeta(a, q_plus) + hurwitz_zeta(a, q_minus));
  total -= 0.5 * a * x2 * std::pow(L, -a) * (hurwitz_zeta(a + 2.0, q_plus) + hurwitz_zeta(a + 2.0, q_minus));
  total += 0.125 * a * (a + 2.0) * x2 * x2 * std::pow(L, -a) *
           (hurwitz_zeta(a + 4.0, q_plus) + hurwitz_zeta(a + 4.0, q_minus));
  return total;
}

// sum_{j in Z^2} |(dx, dy) + j L|^(-a), 0 <= dx, dy < L, (dx, dy) != 0.
double plane_sum(double a, double dx, double dy, double L) {
  constexpr int kNear = 12;
  double total = 0.0;
  for (int j = -kNear; j <= kNear; ++j) total += line_sum(a, dx + j * L, dy, L);
  // Remaining columns contribute only their mean line integral (exponentially accurate).
  const double c = std::sqrt(kPi) * std::tgamma(0.5 * (a - 1.0)) / std::tgamma(0.5 * a) / L;
  const double b = a - 1.0;
  total += c * std::pow(L, -b) *
           (hurwitz_zeta(b, kNear + 1 + dx / L) + hurwitz_zeta(b, kNear + 1 - dx / L));
  return total;
}

}  // namespace

double frac_constant(int n, double s) {
  require_fractional_order(s);
  if (n < 1) throw DomainError("dimension must be positive");
  const double half_n = 0.5 * n;
  return s * std::pow(4.0, s) * std::tgamma(half_n + s) /
         (std::pow(kPi, half_n) * std::tgamma(1.0 - s));
}

double hurwitz_zeta(double a, double q) {
  if (!(a > 1.0) || !(q > 0.0)) throw DomainError("hurwitz_zeta requires a > 1 and q > 0");
  // Euler-Maclaurin with M direct terms and Bernoulli corrections.
  constexpr int kTerms = 16;
  static constexpr std::array<double, 8> kBernoulli = {
      1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};
  double sum = 0.0;
  for (int k = 0; k < kTerms; ++k) sum += std::pow(q + k, -a);
  const double w = q + kTerms;
  sum += std::pow(w, 1.0 - a) / (a - 1.0) + 0.5 * std::pow(w, -a);
  double rising = a;          // a (a+1) ... (a+2j-2)
  double factorial = 2.0;     // (2j)!
  double wpow = std::pow(w, -a - 1.0);
  for (std::size_t j = 0; j < kBernoulli.size(); ++j) {
    sum += kBernoulli[j] / factorial * rising * wpow;
    const double m = 2.0 * static_cast<double>(j + 1);
    rising *= (a + m - 1.0) * (a + m);
    factorial *= (m + 1.0) * (m + 2.0);
    wpow /= w * w;
  }
  return sum;
}

Vector periodic_kernel_sums(const Grid& grid, double exponent) {
  if (!(exponent > grid.dim())) throw DomainError("kernel exponent must exceed the dimension");
  const Index n = grid.points_per_dim();
  const double L = grid.extent();
  const double h = grid.spacing();
  Vector out = Vector::Zero(grid.size());
  if (grid.dim() == 1) {
    Vector half(n / 2 + 1);
    for (Index m = 1; m <= n / 2; ++m) {
      const double q1 = static_cast<double>(m) / static_cast<double>(n);
      const double q2 = static_cast<double>(n - m) / static_cast<double>(n);
      half[m] = std::pow(L, -exponent) * (hurwitz_zeta(exponent, q1) + hurwitz_zeta(exponent, q2));
    }
    for (Index m = 1; m < n; ++m) out[m] = half[std::min(m, n - m)];
    return out;
  }
  const Index m = n / 2 + 1;
  Matrix table = Matrix::Zero(m, m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = i; j < m; ++j) {
      if (i == 0 && j == 0) continue;
      table(i, j) = plane_sum(exponent, static_cast<double>(i) * h, static_cast<double>(j) * h, L);
      table(j, i) = table(i, j);
    }
  }
  for (Index lin = 1; lin < grid.size(); ++lin) {
    const MultiIndex mi = grid.multi_index(lin);
    out[lin] = table(std::min(mi[0], n - mi[0]), std::min(mi[1], n - mi[1]));
  }
  return out;
}

std::string to_string(Flavor f) { return f == Flavor::spectral ? "spectral" : "kernel"; }

Flavor flavor_from_string(const std::string& name) {
  if (name == "spectral") return Flavor::spectral;
  if (name == "kernel") return Flavor::kernel;
  throw DomainError("unknown operator flavor '" + name + "' (expected spectral or kernel)");
}

OperatorKernel::OperatorKernel(const Grid& grid, double order, Flavor flavor)
    : grid_(grid), order_(order), flavor_(flavor) {}

OperatorKernel OperatorKernel::spectral(const Grid& grid, double order) {
  if (!(order > 0.0)) throw DomainError("operator order must be positive");
  OperatorKernel k(grid, order, Flavor::spectral);
  k.symbol_ = spectral::power_symbol(grid, 2.0 * order);
  k.matrix_ = std::make_shared<const spectral::CirculantOperator>(
      spectral::CirculantOperator::from_even_symbol(grid, k.symbol_));
  return k;
}

OperatorKernel OperatorKernel::kernel(const Grid& grid, double order) {
  require_fractional_order(order);
  OperatorKernel k(grid, order, Flavor::kernel);
  const double scale = frac_constant(grid.dim(), order) * grid.cell_volume();
  k.weights_ = scale * periodic_kernel_sums(grid, grid.dim() + 2.0 * order);
  // Generator of the matrix: diagonal = off-diagonal row sum, off-diagonal = -W.
  Vector gen = -k.weights_;
  double diag = 0.0;
  for (Index i = 1; i < gen.size(); ++i) diag += k.weights_[i];
  gen[0] = diag;
  k.matrix_ = std::make_shared<const spectral::CirculantOperator>(
      spectral::CirculantOperator::from_generator(grid, std::move(gen)));
  return k;
}

double OperatorKernel::weight(Index x, Index y) const {
  if (flavor_ != Flavor::kernel) throw DomainError("weights exist only for the kernel flavor");
  return weights_[spectral::periodic_offset(grid_, x, y)];
}

const Vector& OperatorKernel::weights() const {
  if (flavor_ != Flavor::kernel) throw DomainError("weights exist only for the kernel flavor");
  return weights_;
}

const Vector& OperatorKernel::symbol() const {
  if (flavor_ != Flavor::spectral) throw DomainError("symbol exists only for the spectral flavor");
  return symbol_;
}

Matrix OperatorKernel::block(const IndexList& rows, const IndexList& cols) const {
  return matrix_->block(rows, cols);
}

Matrix OperatorKernel::dense() const {
  if (grid_.size() > kMaxDenseDofs) {
    throw ResourceLimitError("dense operator with " + std::to_string(grid_.size()) +
                             " degrees of freedom exceeds the cap of " + std::to_string(kMaxDenseDofs));
  }
  IndexList all(static_cast<std::size_t>(grid_.size()));
  for (Index i = 0; i < grid_.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  return block(all, all);
}

Field frac_laplacian(const OperatorKernel& kernel, const Field& u, bool half) {
  require_same_grid(kernel.grid(), u.grid());
  const Grid& g = kernel.grid();
  if (kernel.flavor() == Flavor::spectral) {
    const Vector sym = half ? spectral::power_symbol(g, kernel.order()) : kernel.symbol();
    return Field(g, spectral::apply(g, sym, u.values()));
  }
  if (half) throw DomainError("half-order action is only available for the spectral flavor");
  const Vector& uv = u.values();
  Vector out(g.size());
  for (Index x = 0; x < g.size(); ++x) {
    double acc = 0.0;
    for (Index y = 0; y < g.size(); ++y) {
      if (y == x) continue;
      acc += kernel.weight(x, y) * (uv[x] - uv[y]);
    }
    out[x] = acc;
  }
  return Field(g, std::move(out));
}

double frac_gradient_pairing(const OperatorKernel& kernel, const Field& u, const Field& v) {
  if (kernel.flavor() != Flavor::kernel) throw DomainError("fractional gradient pairing needs the kernel flavor");
  require_same_grid(kernel.grid(), u.grid());
  require_same_grid(kernel.grid(), v.grid());
  const Grid& g = kernel.grid();
  const Vector& a = u.values();
  const Vector& b = v.values();
  double acc = 0.0;
  for (Index x = 0; x < g.size(); ++x) {
    double row = 0.0;
    for (Index y = 0; y < g.size(); ++y) {
      if (y == x) continue;
      row += kernel.weight(x, y) * (a[x] - a[y]) * (b[x] - b[y]);
    }
    acc += row;
  }
  return 0.5 * g.cell_volume() * acc;
}

double gagliardo_seminorm(const Grid& grid, const Field& u, double s, double p) {
  require_fractional_order(s);
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("integrability exponent must satisfy 1 < p < inf");
  require_same_grid(grid, u.grid());
  const double c = p == 2.0 ? frac_constant(grid.dim(), s) : 1.0;
  const Vector sums = periodic_kernel_sums(grid, grid.dim() + s * p);
  const double h2n = grid.cell_volume() * grid.cell_volume();
  const Vector& a = u.values();
  double acc = 0.0;
  for (Index x = 0; x < grid.size(); ++x) {
    double row = 0.0;
    for (Index y = 0; y < grid.size(); ++y) {
      if (y == x) continue;
      const double d = std::abs(a[x] - a[y]);
      row += (p == 2.0 ? d * d : std::pow(d, p)) * sums[spectral::periodic_offset(grid, x, y)];
    }
    acc += row;
  }
  return std::pow(0.5 * c * h2n * acc, 1.0 / p);
}

BesselMultiplier::BesselMultiplier(const Grid& grid, double order)
    : grid_(grid), order_(order), symbol_(spectral::bessel_symbol(grid, order)) {}

Field BesselMultiplier::apply(const Field& u) const {
  require_same_grid(grid_, u.grid());
  if (order_ == 0.0) return u;
  return Field(grid_, spectral::apply(grid_, symbol_, u.values()));
}

double sobolev_norm(const BesselMultiplier& bessel, const Field& u) {
  return l2_norm(bessel.apply(u));
}

Matrix sobolev_gram(const Grid& grid, double order, const IndexList& rows, const IndexList& cols) {
  const auto op = spectral::CirculantOperator::from_even_symbol(grid, spectral::bessel_symbol(grid, 2.0 * order));
  return grid.cell_volume() * op.block(rows, cols);
}

}  // namespace fraccald

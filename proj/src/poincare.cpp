#include "fraccald/poincare.hpp"

#include "fraccald/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace fraccald {

namespace {

// h^n (-Delta)^r on the interior; r = 0 is the exact identity.
Matrix order_block(const DomainMask& mask, double r) {
  const Grid& g = mask.grid();
  const auto n = static_cast<Index>(mask.interior().size());
  if (r == 0.0) return g.cell_volume() * Matrix::Identity(n, n);
  const auto op = spectral::CirculantOperator::from_even_symbol(g, spectral::power_symbol(g, 2.0 * r));
  return g.cell_volume() * op.block(mask.interior(), mask.interior());
}

Index shift_steps(double shift, double h) {
  const double steps = shift / h;
  const double rounded = std::round(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps))) {
    throw DomainError("translation is not a multiple of the grid spacing");
  }
  return static_cast<Index>(rounded);
}

Index move_index(const Grid& g, Index i, const Motion& motion, const MultiIndex& steps) {
  const Index n = g.points_per_dim();
  MultiIndex mi = g.multi_index(i);
  switch (motion.kind) {
    case Motion::Kind::identity:
      break;
    case Motion::Kind::translation:
      for (int d = 0; d < g.dim(); ++d) {
        const auto k = static_cast<std::size_t>(d);
        mi[k] = ((mi[k] + steps[k]) % n + n) % n;
      }
      break;
    case Motion::Kind::reflection: {
      const auto k = static_cast<std::size_t>(motion.axis);
      mi[k] = (n - mi[k]) % n;
      break;
    }
    case Motion::Kind::axis_swap:
      std::swap(mi[0], mi[1]);
      break;
  }
  return g.linear_index(mi);
}

}  // namespace

PoincareEstimate poincare_constant(double s, double t, const DomainMask& mask) {
  if (!(s >= 0.0) || !(t >= s) || !(t > 0.0)) {
    throw DomainError("Poincare pair requires 0 <= s <= t and t > 0");
  }
  if (s == t) return PoincareEstimate{s, t, mask, 1.0, 0, 0.0};
  const Matrix bs = order_block(mask, s);
  const Matrix bt = order_block(mask, t);
  // Reversed pencil B_t x = mu B_s x; B_s is the better conditioned side.
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(bt, bs, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw NumericalError("Poincare eigensolve failed");
  const double mu = es.eigenvalues()[0];
  if (!(mu > 0.0)) throw NumericalError("degenerate Poincare pencil (nonpositive eigenvalue)");
  const Vector x = es.eigenvectors().col(0);
  const Vector btx = bt * x;
  const double residual = (btx - mu * (bs * x)).norm() / btx.norm();
  return PoincareEstimate{s, t, mask, 1.0 / std::sqrt(mu), 1, residual};
}

InterpolationReport interpolation_check(const DomainMask& mask, double z, double r, double s, double t, double tol) {
  const bool upper = t >= s && s >= r && r > z && z >= 0.0;
  const bool nested = t >= r && r >= s && s >= z && z >= 0.0 && r > z;
  if (!(upper || nested)) {
    throw DomainError("interpolation parameters must satisfy r > z and t >= s >= r > z >= 0 or t >= r >= s >= z >= 0");
  }
  if (!(t > 0.0)) throw DomainError("interpolation requires t > 0");
  InterpolationReport rep{z, r, s, t, 0.0, 0.0, 0.0, 0.0, false};
  rep.c_rz = poincare_constant(z, r, mask).constant;
  rep.c_ts = poincare_constant(s, t, mask).constant;
  rep.bound = std::pow(rep.c_rz, (t - s) / (r - z));
  rep.ratio = rep.c_ts / rep.bound;
  rep.holds = rep.c_ts <= rep.bound * (1.0 + tol);
  return rep;
}

CylinderReport cylinder_limit(double extent, Index points_per_dim, double lo, double hi,
                              const std::vector<double>& elongations, double s) {
  if (!(hi > lo)) throw DomainError("cylinder section must be a nonempty interval");
  if (elongations.empty()) throw DomainError("cylinder_limit needs at least one elongation");
  if (points_per_dim * points_per_dim > kMaxDenseDofs) {
    throw ResourceLimitError("cylinder grid " + std::to_string(points_per_dim) + "^2 exceeds the dense cap");
  }
  CylinderReport rep{s, elongations, {}, 0.0, 0.0, true};
  const Grid g2(2, extent, points_per_dim);
  for (double a : elongations) {
    if (!(a > 0.0) || a >= extent) throw DomainError("elongation must lie in (0, L)");
    // Centered along x; constants are translation invariant.
    const DomainMask m = mask_from_predicate(
        g2, [=](const Point& p) { return std::abs(p[0]) < 0.5 * a && p[1] > lo && p[1] < hi; });
    rep.constants.push_back(poincare_constant(0.0, s, m).constant);
  }
  const Grid g1(1, extent, points_per_dim);
  const DomainMask section = mask_from_predicate(g1, [=](const Point& p) { return p[0] > lo && p[0] < hi; });
  rep.section_constant = poincare_constant(0.0, s, section).constant;
  rep.relative_gap = (rep.section_constant - rep.constants.back()) / rep.section_constant;
  for (std::size_t i = 1; i < rep.constants.size(); ++i) {
    if (elongations[i] >= elongations[i - 1] && rep.constants[i] < rep.constants[i - 1] - 1e-8) rep.monotone = false;
  }
  return rep;
}

Motion Motion::translate(const Point& shift) {
  Motion m;
  m.kind = Kind::translation;
  m.shift = shift;
  return m;
}

Motion Motion::reflect(int axis) {
  Motion m;
  m.kind = Kind::reflection;
  m.axis = axis;
  return m;
}

Motion Motion::swap() {
  Motion m;
  m.kind = Kind::axis_swap;
  return m;
}

DomainMask apply_motion(const DomainMask& mask, const Motion& motion) {
  const Grid& g = mask.grid();
  MultiIndex steps{0, 0};
  switch (motion.kind) {
    case Motion::Kind::translation:
      for (int d = 0; d < g.dim(); ++d) steps[static_cast<std::size_t>(d)] = shift_steps(motion.shift[d], g.spacing());
      if (g.dim() == 1 && motion.shift[1] != 0.0) throw DomainError("translation has a second component in dimension 1");
      break;
    case Motion::Kind::reflection:
      if (motion.axis < 0 || motion.axis >= g.dim()) throw DomainError("reflection axis out of range");
      break;
    case Motion::Kind::axis_swap:
      if (g.dim() != 2) throw DomainError("axis swap needs a 2-d grid");
      break;
    case Motion::Kind::identity:
      break;
  }
  auto move_all = [&](const IndexList& idx) {
    IndexList out;
    out.reserve(idx.size());
    for (Index i : idx) out.push_back(move_index(g, i, motion, steps));
    return out;
  };
  std::map<std::string, IndexList> windows;
  for (const auto& [name, idx] : mask.windows()) windows.emplace(name, move_all(idx));
  return DomainMask(g, move_all(mask.interior()), std::move(windows));
}

InvarianceReport rigid_invariance_check(const DomainMask& mask, const Motion& motion, double s, double t) {
  const DomainMask moved = apply_motion(mask, motion);
  InvarianceReport rep{};
  rep.original = poincare_constant(s, t, mask).constant;
  rep.moved = poincare_constant(s, t, moved).constant;
  rep.relative_difference = std::abs(rep.moved - rep.original) / rep.original;
  return rep;
}

GagliardoResult gagliardo_quotient(const DomainMask& mask, double s, double p, int trials, std::uint64_t seed) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("Gagliardo order must lie in (0,1)");
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("integrability exponent must satisfy 1 < p < inf");
  if (trials < 1) throw DomainError("at least one trial is required");
  const Grid& g = mask.grid();
  const IndexList& in = mask.interior();
  const auto n = static_cast<Index>(in.size());
  const Vector sums = periodic_kernel_sums(g, g.dim() + s * p);
  const double c = p == 2.0 ? frac_constant(g.dim(), s) : 1.0;
  const double hn = g.cell_volume();
  const double num_scale = 0.5 * c * hn * hn;

  Matrix pair(n, n);
  Vector outside = Vector::Zero(n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      pair(a, b) = a == b ? 0.0 : sums[spectral::periodic_offset(g, in[static_cast<std::size_t>(a)], in[static_cast<std::size_t>(b)])];
    }
    double acc = 0.0;
    for (Index y : mask.exterior()) acc += sums[spectral::periodic_offset(g, in[static_cast<std::size_t>(a)], y)];
    outside[a] = acc;
  }

  auto spow = [p](double x) { return x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), p - 1.0), x); };
  auto apow = [p](double x) { return p == 2.0 ? x * x : std::pow(std::abs(x), p); };
  // Quotient and its gradient with respect to the interior values.
  auto evaluate = [&](const Vector& u, Vector* grad) {
    double num = 0.0;
    double den = 0.0;
    Vector gnum = Vector::Zero(n);
    Vector gden = Vector::Zero(n);
    for (Index a = 0; a < n; ++a) {
      double row = 0.0;
      double grow = 0.0;
      for (Index b = 0; b < n; ++b) {
        if (a == b) continue;
        const double d = u[a] - u[b];
        row += apow(d) * pair(a, b);
        grow += spow(d) * pair(a, b);
      }
      num += row + 2.0 * apow(u[a]) * outside[a];
      gnum[a] = 2.0 * p * (grow + spow(u[a]) * outside[a]);
      den += apow(u[a]);
      gden[a] = p * spow(u[a]);
    }
    const double q = num_scale * num / (hn * den);
    if (grad) *grad = (num_scale * gnum - q * hn * gden) / (hn * den);
    return q;
  };
  auto normalize = [&](Vector& u) {
    double den = 0.0;
    for (Index a = 0; a < n; ++a) den += apow(u[a]);
    u /= std::pow(hn * den, 1.0 / p);
  };

  Rng rng(seed);
  GagliardoResult best{std::numeric_limits<double>::infinity(), 0.0, trials, -1, Field::zeros(g)};
  Vector best_u;
  for (int trial = 0; trial < trials; ++trial) {
    Vector u = trial == 0 ? Vector::Ones(n) : Vector(rng.split("trial" + std::to_string(trial)).uniform_vector(n));
    if (u.cwiseAbs().maxCoeff() == 0.0) u.setOnes();
    normalize(u);
    Vector grad;
    double q = evaluate(u, &grad);
    double step = 0.1 * u.norm() / std::max(grad.norm(), 1e-300) * q;
    if (!(step > 0.0) || !std::isfinite(step)) step = 1e-3;
    int quiet = 0;
    for (int it = 0; it < 20000 && quiet < 3; ++it) {
      Vector trial_u;
      double trial_q = q;
      double tau = step;
      bool accepted = false;
      for (int halving = 0; halving < 60; ++halving) {
        trial_u = u - tau * grad;
        normalize(trial_u);
        trial_q = evaluate(trial_u, nullptr);
        if (trial_q < q) {
          accepted = true;
          break;
        }
        tau *= 0.5;
      }
      if (!accepted) break;
      Vector new_grad;
      trial_q = evaluate(trial_u, &new_grad);
      const Vector du = trial_u - u;
      const Vector dg = new_grad - grad;
      const double curv = du.dot(dg);
      step = curv > 0.0 ? du.squaredNorm() / curv : 2.0 * tau;
      quiet = (q - trial_q) <= 1e-6 * q ? quiet + 1 : 0;
      u = std::move(trial_u);
      grad = std::move(new_grad);
      q = trial_q;
    }
    if (q < best.quotient) {
      best.quotient = q;
      best.best_trial = trial;
      best_u = u;
    }
  }
  Vector full = Vector::Zero(g.size());
  for (Index a = 0; a < n; ++a) full[in[static_cast<std::size_t>(a)]] = best_u[a];
  best.minimizer = Field(g, std::move(full));
  best.constant = std::pow(best.quotient, -1.0 / p);
  return best;
}

}  // namespace fraccald

#pragma once

#include "fraccald/forms.hpp"

#include <cstdint>
#include <vector>

namespace fraccald {

/**
 * Optimal constant C_{t,s} in ||(-Delta)^{s/2} u|| <= C ||(-Delta)^{t/2} u||
 * over fields supported on the interior of the mask (spectral operators).
 */
struct PoincareEstimate {
  double s;
  double t;
  DomainMask mask;
  double constant;
  /// Dense symmetric-definite solves are direct; this counts solver calls.
  int eigen_iterations;
  /// ||B_t x - mu B_s x|| / ||B_t x|| for the extremal pair.
  double residual;
};

/// Requires 0 <= s <= t and t > 0. For s == t the constant is exactly 1.
PoincareEstimate poincare_constant(double s, double t, const DomainMask& mask);

struct InterpolationReport {
  double z, r, s, t;
  double c_rz;
  double c_ts;
  /// C_{r,z}^{(t-s)/(r-z)}.
  double bound;
  double ratio;  // c_ts / bound
  bool holds;    // c_ts <= bound * (1 + tol)
};

/**
 * Compares C_{t,s} with C_{r,z}^{(t-s)/(r-z)}. Valid orderings:
 * r > z and either t >= s >= r > z >= 0 or t >= r >= s >= z >= 0.
 */
InterpolationReport interpolation_check(const DomainMask& mask, double z, double r, double s, double t,
                                        double tol = 1e-3);

struct CylinderReport {
  double s;
  std::vector<double> elongations;
  std::vector<double> constants;  // C(s, (0,A) x omega), pair (0, s)
  double section_constant;        // C(s, omega) on the 1-d grid
  double relative_gap;            // (section - last) / section
  bool monotone;                  // nondecreasing up to 1e-8
};

/**
 * Constants of the rectangles (0, A) x (lo, hi) on a 2-d grid of the given
 * extent and resolution, against the 1-d constant of (lo, hi) on the matching
 * 1-d grid.
 */
CylinderReport cylinder_limit(double extent, Index points_per_dim, double lo, double hi,
                              const std::vector<double>& elongations, double s);

/// Lattice-compatible rigid motion of the torus.
struct Motion {
  enum class Kind { identity, translation, reflection, axis_swap };
  Kind kind = Kind::identity;
  Point shift = Point::Zero();  // translation; must be a multiple of the spacing
  int axis = 0;                 // reflection x_axis -> -x_axis

  static Motion translate(const Point& shift);
  static Motion reflect(int axis);
  static Motion swap();
};

/// Image of the mask under the motion (windows are moved as well).
DomainMask apply_motion(const DomainMask& mask, const Motion& motion);

struct InvarianceReport {
  double original;
  double moved;
  double relative_difference;
};

InvarianceReport rigid_invariance_check(const DomainMask& mask, const Motion& motion, double s, double t);

struct GagliardoResult {
  double quotient;  // min [u]_{s,p}^p / ||u||_{L^p}^p found
  double constant;  // quotient^{-1/p}, comparable with poincare_constant(0, s)
  int trials;
  int best_trial;
  Field minimizer;
};

/**
 * Minimizes the discrete Gagliardo-Poincare quotient over interior-supported
 * fields by normalized projected descent (Barzilai-Borwein steps with step
 * halving). Trial 0 starts from the interior indicator, the rest from seeded
 * uniform noise. Stops at relative quotient change 1e-6.
 */
GagliardoResult gagliardo_quotient(const DomainMask& mask, double s, double p, int trials = 5,
                                   std::uint64_t seed = 0);

}  // namespace fraccald

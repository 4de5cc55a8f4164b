#pragma once

#include "fraccald/dnmap.hpp"

#include <vector>

namespace fraccald {

/**
 * Conductivity gamma with background deviation m = gamma^{1/2} - 1 and
 * electric potential q = -(K m) / gamma^{1/2}, K the kernel-flavor operator.
 */
struct Conductivity {
  Field gamma;
  Field sqrt_gamma;
  Field m;
  Field q;
  double gamma0;  // min gamma
};

Conductivity make_conductivity(const Field& gamma, const OperatorKernel& kernel);

/// Schroedinger form E_K + q of the conductivity's potential.
BilinearForm schrodinger_form(const Conductivity& c, const OperatorKernel& kernel);

struct LiouvilleGap {
  double conductivity_side;  // B_gamma(u, phi)
  double schrodinger_side;   // E_K(a u, a phi) + <q a u, a phi>
  double gap;                // |difference| / scale
};

/**
 * Both sides of the Liouville identity, each evaluated by a direct double sum
 * over the kernel weights. The scale is the sum of the magnitudes of the three
 * terms (the gap is 0 when all vanish).
 */
LiouvilleGap liouville_identity_gap(const Conductivity& c, const OperatorKernel& kernel, const Field& u,
                                    const Field& phi);

enum class Direction { to_schrodinger, to_conductivity };

/// v = gamma^{1/2} u, or u = gamma^{-1/2} v.
Field transform(const Conductivity& c, const Field& u, Direction direction);

struct DnComparison {
  double conductivity_pairing;  // <Lambda_gamma f, g>
  double schrodinger_pairing;   // <Lambda_q f, g>
  double gap;                   // |difference| / max(1, |pairings|)
};

/// Requires (supp f ∪ supp g) ∩ supp m = ∅ on the grid.
DnComparison dn_comparison_gap(const Conductivity& c, const OperatorKernel& kernel, const DomainMask& mask,
                               const Field& f, const Field& g);

/**
 * Second conductivity with the same interior potential: solves
 *   (K + diag q_1) m = 0 on the interior, m = m0 on the exterior,
 * and sets m_2 = m_1 - m, gamma_2 = (1 + m_2)^2. m0 must vanish on every
 * window of the mask and gamma_2 must stay above gamma_0 / 2.
 */
Conductivity nonuniqueness_pair(const Conductivity& c1, const OperatorKernel& kernel, const DomainMask& mask,
                                const Field& m0_exterior);

struct ReconstructionOptions {
  int max_iterations = 200;
  double ridge = 1e-10;               // damping floor, relative to max diag(J^T J)
  double confidence_threshold = 1e-8; // relative data misfit above which the result is flagged
};

struct ReconstructionResult {
  Field gamma;
  Field q;
  Field m;
  double fit_residual;  // ||Lambda(q) - data|| / ||data|| over the fitted entries
  bool low_confidence;
  int iterations;
};

/**
 * Recovers an interior conductivity from its exterior DN map assuming gamma = 1
 * outside the interior. Stage 1 fits the interior potential by damped
 * Gauss-Newton on the off-diagonal DN entries (these do not see exterior
 * values of q); stage 2 solves (K + diag q) m = -q on the interior with m = 0
 * outside and returns gamma = (1 + m)^2.
 */
ReconstructionResult reconstruct_conductivity(const DNMap& dn_data, const OperatorKernel& kernel,
                                              const ReconstructionOptions& options = {});

}  // namespace fraccald

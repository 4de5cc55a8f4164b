#pragma once

#include "fraccald/solver.hpp"

#include <filesystem>

namespace fraccald {

/**
 * Exterior Dirichlet-to-Neumann map in the exterior indicator basis:
 *   Lambda[f][g] = g_E^T matrix f_E = B(u_f, g).
 * Rows and columns follow mask.exterior().
 */
struct DNMap {
  DomainMask mask;
  Matrix matrix;
  std::string descriptor;

  double pairing(const Field& f, const Field& g) const;
  /// Submatrix with rows in w_to (measurements) and columns in w_from (data).
  Matrix window_block(const IndexList& w_from, const IndexList& w_to) const;
};

/// Lambda = A_EE - A_EI A_II^{-1} A_IE. Refuses non-coercive forms.
DNMap assemble_dn(const BilinearForm& form, const DomainMask& mask);
DNMap assemble_dn(const ExteriorSolver& solver);

struct AlessandriniSides {
  double lhs;  // (Lambda_1 - Lambda_2)[f][g]
  double rhs;  // (B_1 - B_2)(u_f, u*_g)
};

/// Both sides of the Alessandrini identity; f and g must vanish on the interior.
AlessandriniSides alessandrini_gap(const DNMap& dn1, const DNMap& dn2, const BilinearForm& form1,
                                   const BilinearForm& form2, const DomainMask& mask, const Field& f,
                                   const Field& g);

/// max |(Lambda_1 - Lambda_2)| over the w_from -> w_to block.
double window_gap(const DNMap& dn1, const DNMap& dn2, const IndexList& w_from, const IndexList& w_to);
bool window_equal(const DNMap& dn1, const DNMap& dn2, const IndexList& w_from, const IndexList& w_to, double tol);

/// Writes row, col, grid_row, grid_col, value.
void write_dn_csv(const DNMap& dn, const std::filesystem::path& path);

}  // namespace fraccald

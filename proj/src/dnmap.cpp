#include "fraccald/dnmap.hpp"

#include "fraccald/csv.hpp"

namespace fraccald {

namespace {

void require_exterior_support(const DomainMask& mask, const Field& f, const char* name) {
  for (Index i : mask.interior()) {
    if (f[i] != 0.0) {
      throw DomainError(std::string(name) + " must vanish on the interior, nonzero at index " + std::to_string(i));
    }
  }
}

IndexList exterior_positions(const DomainMask& mask, const IndexList& window) {
  IndexList pos;
  pos.reserve(window.size());
  for (Index i : window) {
    if (mask.is_interior(i)) throw DomainError("window index " + std::to_string(i) + " is not exterior");
    pos.push_back(mask.local_position(i));
  }
  return pos;
}

}  // namespace

double DNMap::pairing(const Field& f, const Field& g) const {
  require_same_grid(mask.grid(), f.grid());
  require_same_grid(mask.grid(), g.grid());
  const Vector fe = gather(f.values(), mask.exterior());
  const Vector ge = gather(g.values(), mask.exterior());
  return ge.dot(matrix * fe);
}

Matrix DNMap::window_block(const IndexList& w_from, const IndexList& w_to) const {
  return gather(matrix, exterior_positions(mask, w_to), exterior_positions(mask, w_from));
}

DNMap assemble_dn(const ExteriorSolver& solver) {
  const DomainMask& mask = solver.mask();
  const Matrix& m = solver.form().matrix();
  const Matrix a_ee = gather(m, mask.exterior(), mask.exterior());
  const Matrix a_ei = gather(m, mask.exterior(), mask.interior());
  return DNMap{mask, a_ee + a_ei * solver.interior_response(), solver.form().descriptor().describe()};
}

DNMap assemble_dn(const BilinearForm& form, const DomainMask& mask) {
  return assemble_dn(ExteriorSolver(form, mask));
}

AlessandriniSides alessandrini_gap(const DNMap& dn1, const DNMap& dn2, const BilinearForm& form1,
                                   const BilinearForm& form2, const DomainMask& mask, const Field& f,
                                   const Field& g) {
  require_exterior_support(mask, f, "f");
  require_exterior_support(mask, g, "g");
  const Field uf = ExteriorSolver(form1, mask).solve(f).u;
  const Field ug = ExteriorSolver(form2, mask).solve_adjoint(g).u;
  const double lhs = dn1.pairing(f, g) - dn2.pairing(f, g);
  const double rhs = form1(uf, ug) - form2(uf, ug);
  return {lhs, rhs};
}

double window_gap(const DNMap& dn1, const DNMap& dn2, const IndexList& w_from, const IndexList& w_to) {
  const Matrix d = dn1.window_block(w_from, w_to) - dn2.window_block(w_from, w_to);
  return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
}

bool window_equal(const DNMap& dn1, const DNMap& dn2, const IndexList& w_from, const IndexList& w_to, double tol) {
  return window_gap(dn1, dn2, w_from, w_to) <= tol;
}

void write_dn_csv(const DNMap& dn, const std::filesystem::path& path) {
  CsvWriter out(path, {"row", "col", "grid_row", "grid_col", "value"});
  const IndexList& ext = dn.mask.exterior();
  for (Index c = 0; c < dn.matrix.cols(); ++c) {
    for (Index r = 0; r < dn.matrix.rows(); ++r) {
      out.row({static_cast<long long>(r), static_cast<long long>(c),
               static_cast<long long>(ext[static_cast<std::size_t>(r)]),
               static_cast<long long>(ext[static_cast<std::size_t>(c)]), dn.matrix(r, c)});
    }
  }
}

}  // namespace fraccald

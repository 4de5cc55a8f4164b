#include "fraccald/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fraccald {

namespace {

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, double extent, Index points_per_dim)
    : dim_(dim), extent_(extent), n_(points_per_dim) {
  if (dim != 1 && dim != 2) {
    throw DomainError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw DomainError("grid extent must be positive and finite");
  }
  if (points_per_dim < 8 || !is_power_of_two(points_per_dim)) {
    throw DomainError("points per dimension must be a power of two >= 8, got " +
                      std::to_string(points_per_dim));
  }
  spacing_ = extent_ / static_cast<double>(n_);
  size_ = dim_ == 1 ? n_ : n_ * n_;
  cell_volume_ = dim_ == 1 ? spacing_ : spacing_ * spacing_;
}

Grid make_grid(int dim, double extent, Index points_per_dim) {
  return Grid(dim, extent, points_per_dim);
}

MultiIndex Grid::multi_index(Index linear) const {
  if (dim_ == 1) return {linear, 0};
  return {linear / n_, linear % n_};
}

Index Grid::linear_index(const MultiIndex& mi) const {
  if (dim_ == 1) return mi[0];
  return mi[0] * n_ + mi[1];
}

Point Grid::coordinate(Index linear) const {
  const MultiIndex mi = multi_index(linear);
  const double lo = -0.5 * extent_;
  Point p(lo + static_cast<double>(mi[0]) * spacing_, 0.0);
  if (dim_ == 2) p[1] = lo + static_cast<double>(mi[1]) * spacing_;
  return p;
}

Index Grid::nearest_index(const Point& p) const {
  MultiIndex mi{0, 0};
  for (int d = 0; d < dim_; ++d) {
    const double t = (p[d] + 0.5 * extent_) / spacing_;
    Index k = static_cast<Index>(std::llround(t)) % n_;
    if (k < 0) k += n_;
    mi[static_cast<std::size_t>(d)] = k;
  }
  return linear_index(mi);
}

double Grid::wavenumber(Index bin) const {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_mode(bin)) / extent_;
}

Field::Field(const Grid& grid, Vector values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DomainError("field length " + std::to_string(values_.size()) +
                      " does not match grid size " + std::to_string(grid_.size()));
  }
  if (!values_.allFinite()) throw DomainError("field has non-finite entries");
}

Field Field::zeros(const Grid& grid) { return Field(grid, Vector::Zero(grid.size())); }

Field Field::constant(const Grid& grid, double value) {
  return Field(grid, Vector::Constant(grid.size(), value));
}

Field Field::from_function(const Grid& grid, const std::function<double(const Point&)>& f) {
  Vector v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) v[i] = f(grid.coordinate(i));
  return Field(grid, std::move(v));
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw DomainError("fields live on different grids");
}

double inner(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  return a.grid().cell_volume() * a.values().dot(b.values());
}

double l2_norm(const Field& a) { return std::sqrt(inner(a, a)); }

DomainMask::DomainMask(const Grid& grid, IndexList interior,
                       std::map<std::string, IndexList> windows)
    : grid_(grid), interior_(std::move(interior)), windows_(std::move(windows)) {
  std::sort(interior_.begin(), interior_.end());
  interior_.erase(std::unique(interior_.begin(), interior_.end()), interior_.end());
  const auto n = static_cast<std::size_t>(grid_.size());
  membership_.assign(n, 0);
  std::vector<char> inside(n, 0);
  for (Index i : interior_) {
    if (i < 0 || i >= grid_.size()) throw DomainError("interior index out of range");
    inside[static_cast<std::size_t>(i)] = 1;
  }
  for (Index i = 0; i < grid_.size(); ++i) {
    if (!inside[static_cast<std::size_t>(i)]) exterior_.push_back(i);
  }
  if (interior_.empty()) throw DomainError("domain mask has an empty interior");
  if (exterior_.empty()) throw DomainError("domain mask has an empty exterior");
  for (std::size_t k = 0; k < interior_.size(); ++k) {
    membership_[static_cast<std::size_t>(interior_[k])] = static_cast<Index>(k);
  }
  for (std::size_t k = 0; k < exterior_.size(); ++k) {
    membership_[static_cast<std::size_t>(exterior_[k])] = -static_cast<Index>(k) - 1;
  }
  for (auto& [name, idx] : windows_) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (idx.empty()) throw DomainError("window '" + name + "' is empty");
    for (Index i : idx) {
      if (i < 0 || i >= grid_.size() || inside[static_cast<std::size_t>(i)]) {
        throw DomainError("window '" + name + "' contains a non-exterior index");
      }
    }
  }
}

const IndexList& DomainMask::window(const std::string& name) const {
  auto it = windows_.find(name);
  if (it == windows_.end()) throw DomainError("unknown window '" + name + "'");
  return it->second;
}

Index DomainMask::local_position(Index i) const {
  const Index m = membership_[static_cast<std::size_t>(i)];
  return m >= 0 ? m : -m - 1;
}

Field DomainMask::restrict_to_exterior(const Field& f) const {
  require_same_grid(grid_, f.grid());
  Field out = f;
  for (Index i : interior_) out[i] = 0.0;
  return out;
}

Field DomainMask::restrict_to_interior(const Field& f) const {
  require_same_grid(grid_, f.grid());
  Field out = f;
  for (Index i : exterior_) out[i] = 0.0;
  return out;
}

IndexList select_indices(const Grid& grid, const PointPredicate& pred) {
  IndexList out;
  for (Index i = 0; i < grid.size(); ++i) {
    if (pred(grid.coordinate(i))) out.push_back(i);
  }
  return out;
}

DomainMask mask_from_predicate(const Grid& grid, const PointPredicate& inside,
                               const std::map<std::string, PointPredicate>& windows) {
  IndexList interior = select_indices(grid, inside);
  std::map<std::string, IndexList> win;
  for (const auto& [name, pred] : windows) {
    IndexList idx;
    bool any = false;
    for (Index i = 0; i < grid.size(); ++i) {
      const Point p = grid.coordinate(i);
      if (!pred(p)) continue;
      any = true;
      if (!inside(p)) idx.push_back(i);
    }
    if (!any) throw DomainError("window '" + name + "' selects no grid points");
    if (idx.empty()) throw DomainError("window '" + name + "' lies wholly inside the domain");
    win.emplace(name, std::move(idx));
  }
  return DomainMask(grid, std::move(interior), std::move(win));
}

Vector gather(const Vector& v, const IndexList& idx) {
  Vector out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Index>(k)] = v[idx[k]];
  return out;
}

Matrix gather(const Matrix& m, const IndexList& rows, const IndexList& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(rows[i], cols[j]);
    }
  }
  return out;
}

}  // namespace fraccald

#pragma once

#include "fraccald/core.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>

namespace fraccald {

using Point = Eigen::Vector2d;
using MultiIndex = std::array<Index, 2>;

/**
 * Uniform periodic lattice on the torus [-L/2, L/2)^dim.
 *
 * Points are stored lexicographically (row-major): the linear index of
 * (i0, i1) is i0 * N + i1, and coordinate j of a point is -L/2 + i_j * h.
 * Immutable after construction.
 */
class Grid {
 public:
  /// Throws DomainError unless dim is 1 or 2 and N is a power of two >= 8.
  Grid(int dim, double extent, Index points_per_dim);

  int dim() const { return dim_; }
  double extent() const { return extent_; }
  Index points_per_dim() const { return n_; }
  double spacing() const { return spacing_; }
  /// Total number of points, N^dim.
  Index size() const { return size_; }
  /// Quadrature weight h^dim.
  double cell_volume() const { return cell_volume_; }

  MultiIndex multi_index(Index linear) const;
  Index linear_index(const MultiIndex& mi) const;
  Point coordinate(Index linear) const;
  /// Nearest lattice point to p (periodically wrapped).
  Index nearest_index(const Point& p) const;

  /// Signed integer mode m in [-N/2, N/2) for FFT bin b.
  Index signed_mode(Index bin) const { return bin < n_ / 2 ? bin : bin - n_; }
  /// Wavenumber 2 pi m / L for FFT bin b.
  double wavenumber(Index bin) const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.extent_ == b.extent_;
  }

 private:
  int dim_;
  double extent_;
  Index n_;
  double spacing_;
  Index size_;
  double cell_volume_;
};

Grid make_grid(int dim, double extent, Index points_per_dim);

/// Real grid function. All entries are finite.
class Field {
 public:
  Field(const Grid& grid, Vector values);
  static Field zeros(const Grid& grid);
  static Field constant(const Grid& grid, double value);
  static Field from_function(const Grid& grid, const std::function<double(const Point&)>& f);

  const Grid& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  Index size() const { return values_.size(); }
  double operator[](Index i) const { return values_[i]; }
  double& operator[](Index i) { return values_[i]; }

 private:
  Grid grid_;
  Vector values_;
};

void require_same_grid(const Grid& a, const Grid& b);

/// L2 pairing h^dim * sum a_i b_i (rectangle rule, exact for trigonometric data).
double inner(const Field& a, const Field& b);
double l2_norm(const Field& a);

using PointPredicate = std::function<bool(const Point&)>;

/**
 * Partition of the grid into interior (Omega) and exterior indices, plus named
 * measurement windows that live in the exterior. All index lists are sorted.
 */
class DomainMask {
 public:
  DomainMask(const Grid& grid, IndexList interior, std::map<std::string, IndexList> windows = {});

  const Grid& grid() const { return grid_; }
  const IndexList& interior() const { return interior_; }
  const IndexList& exterior() const { return exterior_; }
  const std::map<std::string, IndexList>& windows() const { return windows_; }
  const IndexList& window(const std::string& name) const;
  bool is_interior(Index i) const { return membership_[static_cast<std::size_t>(i)] >= 0; }
  /// Position of a grid index inside interior() or exterior().
  Index local_position(Index i) const;

  /// Zero out the interior (resp. exterior) values of a field.
  Field restrict_to_exterior(const Field& f) const;
  Field restrict_to_interior(const Field& f) const;

 private:
  Grid grid_;
  IndexList interior_;
  IndexList exterior_;
  std::map<std::string, IndexList> windows_;
  // >= 0: position in interior_; < 0: -(position in exterior_) - 1.
  std::vector<Index> membership_;
};

DomainMask mask_from_predicate(const Grid& grid, const PointPredicate& inside,
                               const std::map<std::string, PointPredicate>& windows = {});

/// Indices of a predicate, sorted.
IndexList select_indices(const Grid& grid, const PointPredicate& pred);

Vector gather(const Vector& v, const IndexList& idx);
Matrix gather(const Matrix& m, const IndexList& rows, const IndexList& cols);

}  // namespace fraccald

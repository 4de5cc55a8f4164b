#pragma once

#include "fraccald/grid.hpp"

#include <string>

namespace fraccald {

/// exp(1 - 1/(1 - z^2)) for |z| < 1, else 0. Peak value 1 at z = 0.
double bump_profile(double z);

/// Smooth step: 1 for z <= 0, 0 for z >= 1, C-infinity in between.
double smooth_step(double z);

Field bump(const Grid& grid, const Point& center, double radius, double height, double baseline = 0.0);

/// height on |x - c| <= radius, smooth decay to baseline over the next `width`.
Field plateau(const Grid& grid, const Point& center, double radius, double width, double height,
              double baseline = 0.0);

/// max(0, 1 - |x - c| / radius) scaled by height.
Field hat(const Grid& grid, const Point& center, double radius, double height = 1.0);

/// Named analytic or file-backed coefficient family.
struct FamilySpec {
  std::string kind = "constant";  // constant, bump, plateau, hat, csv
  double value = 0.0;
  Point center = Point::Zero();
  double radius = 1.0;
  double width = 0.5;
  double height = 1.0;
  double baseline = 0.0;
  std::string path;
};

Field make_family(const Grid& grid, const FamilySpec& spec);

}  // namespace fraccald

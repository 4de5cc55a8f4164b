#include "fraccald/families.hpp"

#include "fraccald/csv.hpp"

#include <cmath>

namespace fraccald {

namespace {

double distance(const Grid& grid, const Point& p, const Point& c) {
  const double dx = p[0] - c[0];
  const double dy = grid.dim() == 2 ? p[1] - c[1] : 0.0;
  return std::hypot(dx, dy);
}

double transition(double z) { return z > 0.0 ? std::exp(-1.0 / z) : 0.0; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

double bump_profile(double z) {
  const double z2 = z * z;
  return z2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - z2)) : 0.0;
}

double smooth_step(double z) {
  const double a = transition(1.0 - z);
  const double b = transition(z);
  return a / (a + b);
}

Field bump(const Grid& grid, const Point& center, double radius, double height, double baseline) {
  require_positive(radius, "bump radius");
  return Field::from_function(grid, [&](const Point& p) {
    return baseline + height * bump_profile(distance(grid, p, center) / radius);
  });
}

Field plateau(const Grid& grid, const Point& center, double radius, double width, double height, double baseline) {
  require_positive(radius, "plateau radius");
  require_positive(width, "plateau width");
  return Field::from_function(grid, [&](const Point& p) {
    return baseline + height * smooth_step((distance(grid, p, center) - radius) / width);
  });
}

Field hat(const Grid& grid, const Point& center, double radius, double height) {
  require_positive(radius, "hat radius");
  return Field::from_function(grid, [&](const Point& p) {
    return height * std::max(0.0, 1.0 - distance(grid, p, center) / radius);
  });
}

Field make_family(const Grid& grid, const FamilySpec& spec) {
  if (spec.kind == "constant") return Field::constant(grid, spec.value);
  if (spec.kind == "bump") return bump(grid, spec.center, spec.radius, spec.height, spec.baseline);
  if (spec.kind == "plateau") return plateau(grid, spec.center, spec.radius, spec.width, spec.height, spec.baseline);
  if (spec.kind == "hat") {
    Field f = hat(grid, spec.center, spec.radius, spec.height);
    f.values().array() += spec.baseline;
    return f;
  }
  if (spec.kind == "csv") return read_field_csv(spec.path, grid);
  throw DomainError("unknown field family '" + spec.kind + "' (expected constant, bump, plateau, hat or csv)");
}

}  // namespace fraccald

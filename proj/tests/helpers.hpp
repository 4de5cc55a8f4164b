#pragma once

#include "fraccald/grid.hpp"
#include "fraccald/rng.hpp"

#include <cmath>

namespace fraccald::testing {

inline double max_abs(const Vector& v) { return v.cwiseAbs().maxCoeff(); }
inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline DomainMask interval_mask(const Grid& g, double lo, double hi,
                                std::map<std::string, PointPredicate> windows = {}) {
  return mask_from_predicate(g, [=](const Point& p) { return p[0] > lo && p[0] < hi; }, windows);
}

inline PointPredicate interval(double lo, double hi) {
  return [=](const Point& p) { return p[0] > lo && p[0] < hi; };
}

inline Field exterior_noise(const DomainMask& mask, Rng& rng) {
  Field f = rng.noise(mask.grid());
  for (Index i : mask.interior()) f[i] = 0.0;
  return f;
}

inline Field positive_field(const Grid& g, Rng& rng, double lo, double hi) {
  Field f = rng.noise(g);
  f.values() = (lo + 0.5 * (hi - lo) * (f.values().array() + 1.0)).matrix();
  return f;
}

}  // namespace fraccald::testing

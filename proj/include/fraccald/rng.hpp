#pragma once

#include "fraccald/grid.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace fraccald {

/**
 * Seedable, splittable random stream. split(name) derives an independent
 * child stream from the parent seed and a name, so adding a consumer never
 * perturbs the draws seen by another one.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  Rng split(std::string_view name) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : name) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return Rng(mix(seed_ ^ mix(h)));
  }

  /// Uniform on [-1, 1].
  double uniform() { return dist_(engine_); }

  Vector uniform_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = uniform();
    return v;
  }

  Field noise(const Grid& grid) { return Field(grid, uniform_vector(grid.size())); }

  std::mt19937_64& engine() { return engine_; }

 private:
  static std::uint64_t mix(std::uint64_t x) {  // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> dist_{-1.0, 1.0};
};

}  // namespace fraccald

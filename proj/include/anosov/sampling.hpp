// Deterministic sample generators: Halton points, seeded uniform draws.
#pragma once

#include "anosov/core.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace anosov {

inline double radical_inverse(std::uint64_t i, std::uint32_t base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// Point i (starting at 1) of the Halton sequence in [0,1)^dim.
inline Vec halton_point(std::uint64_t i, int dim) {
  static constexpr std::uint32_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  Vec x(dim);
  for (int d = 0; d < dim; ++d) x[d] = radical_inverse(i, primes[d]);
  return x;
}

inline std::vector<Vec> halton_points(std::size_t count, int dim) {
  std::vector<Vec> pts;
  pts.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) pts.push_back(halton_point(i, dim));
  return pts;
}

// Regular grid of side^dim points with a half-cell offset.
inline std::vector<Vec> grid_points(int side, int dim) {
  std::vector<Vec> pts;
  long total = 1;
  for (int d = 0; d < dim; ++d) total *= side;
  pts.reserve(static_cast<std::size_t>(total));
  for (long code = 0; code < total; ++code) {
    long k = code;
    Vec x(dim);
    for (int d = 0; d < dim; ++d) {
      x[d] = (static_cast<double>(k % side) + 0.5) / side;
      k /= side;
    }
    pts.push_back(x);
  }
  return pts;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  Vec uniform_vec(int dim, double lo = 0.0, double hi = 1.0) {
    Vec x(dim);
    for (int d = 0; d < dim; ++d) x[d] = uniform(lo, hi);
    return x;
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace anosov

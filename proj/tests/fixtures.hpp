// Shared example maps for the test suites.
#pragma once

#include "anosov/periodic.hpp"
#include "anosov/shadowing.hpp"
#include "anosov/torus_maps.hpp"

namespace fixtures {

using namespace anosov;

inline ToralAutomorphism cat() { return ToralAutomorphism::from_rows({{2, 1}, {1, 1}}); }

// Companion of x^3 - 5x^2 + 6x - 1: roots 0.198, 1.555, 3.247.
inline ToralAutomorphism three_real() { return ToralAutomorphism::from_rows({{0, 1, 0}, {0, 0, 1}, {1, -6, 5}}); }

// Companion of x^3 - x - 1: real root 1.3247, complex pair of modulus 0.8689.
inline ToralAutomorphism real_complex() { return ToralAutomorphism::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}); }

// Two contracting and two expanding real eigenvalues; fixed points 0 and (1/2, 1/2, 1/2, 1/2).
inline ToralAutomorphism four_real() {
  return ToralAutomorphism::from_rows({{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {-1, -2, 6, 0}});
}

inline DAParams mane_params(double radius = 0.05) {
  DAParams p;
  p.variant = DAVariant::MANE;
  p.center = Vec::Zero(3);
  p.radius = radius;
  p.strength = 0.6;
  return p;
}

inline DAParams hopf_params() {
  DAParams p;
  p.variant = DAVariant::HOPF;
  p.center = Vec::Zero(3);
  p.radius = 0.04;
  p.strength = 0.5;
  return p;
}

inline DAParams mixed_params() {
  DAParams p;
  p.variant = DAVariant::MIXED;
  p.center = Vec::Zero(4);
  p.center_q = Vec::Constant(4, 0.5);
  p.radius = 0.05;
  p.strength = 0.8;
  return p;
}

inline DAMapPtr mane(double radius = 0.05) { return build_da(three_real(), mane_params(radius)); }
inline DAMapPtr hopf() { return build_da(real_complex(), hopf_params()); }
inline DAMapPtr mixed() { return build_da(four_real(), mixed_params()); }

// A g-point over the f-heteroclinic point W^u(p) cap W^s(q) of smallest adapted size, pushed
// forward `steps` times.
inline Vec heteroclinic_point(const DAMap& g, const SemiconjugacyField& h, const Vec& p, const Vec& q, int steps) {
  const auto& s = g.splitting();
  const int n = s.dim(), ds = s.stable_dim();
  double best = 1e300;
  Vec z;
  std::vector<int> k(static_cast<std::size_t>(n), -2);
  while (true) {
    Vec w = q - p;
    for (int i = 0; i < n; ++i) w[i] += k[static_cast<std::size_t>(i)];
    Vec c = s.coords(w);
    const double size = std::max(c.head(ds).norm(), c.tail(n - ds).norm());
    if (size < best) {
      best = size;
      c.head(ds).setZero();
      z = reduce(p + s.from_coords(c));
    }
    int i = n - 1;
    while (i >= 0 && k[static_cast<std::size_t>(i)] == 2) k[static_cast<std::size_t>(i--)] = -2;
    if (i < 0) break;
    ++k[static_cast<std::size_t>(i)];
  }
  Vec x = z;
  for (int it = 0; it < 100; ++it) x = reduce(x + 0.7 * g.metric().difference(z, h.eval(x)));
  for (int i = 0; i < steps; ++i) x = g.eval(x);
  return x;
}

}  // namespace fixtures

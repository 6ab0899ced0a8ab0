// Setup checks for the DA families: central derivative bounds, ball mass, distortion,
// and local product structure.
#pragma once

#include "anosov/core.hpp"
#include "anosov/parallel.hpp"
#include "anosov/sampling.hpp"
#include "anosov/torus_maps.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace anosov {

namespace detail {

// Sample points in the box of half-width `scale` (eigen-coordinates) around a bump center.
inline std::vector<Vec> ball_sample(const DAMap& g, const Bump& b, std::size_t count, double scale) {
  std::vector<Vec> pts;
  pts.reserve(count + 1);
  pts.push_back(reduce(b.center));
  const int n = g.dim();
  for (std::size_t i = 1; i <= count; ++i) {
    const Vec u = halton_point(i, n);
    const Vec c = (2.0 * u.array() - 1.0).matrix() * (scale * b.radius);
    pts.push_back(reduce(b.center + g.splitting().basis() * c));
  }
  return pts;
}

inline double unit_ball_volume(int k) {
  return std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

}  // namespace detail

struct BlockSetup {
  int bump = 0;
  bool stable_type = false;  // central direction sits in the stable bundle
  double lambda = 0.0;       // modulus of the unperturbed central eigenvalue
  double sigma = 0.0;        // inf conorm (unstable type) or sup norm (stable type)
  int m = 0;
};

struct H3Setup {
  double sigma = 0.0;
  int m = 0;
  double rho = 0.0;
  double C = 0.0;
  double r = 0.0;
  bool ok = false;
  std::vector<BlockSetup> blocks;
  std::size_t samples = 0;
};

// Ball of adapted radius rho has Haar volume |det V| w_s w_u rho^n (w_k: unit k-ball volume),
// an upper bound once the ball wraps around the torus.
inline double adapted_ball_volume(const HyperbolicSplitting& s, double rho) {
  const int ds = s.stable_dim(), du = s.unstable_dim();
  return std::abs(s.basis().determinant()) * detail::unit_ball_volume(ds) *
         detail::unit_ball_volume(du) * std::pow(rho, s.dim());
}

inline H3Setup verify_h3_setup(const DAMap& g, double r, std::size_t samples = 20000) {
  const auto& s = g.splitting();
  H3Setup rep;
  rep.r = r;
  rep.C = 1.0 / (1.0 - s.a());
  if (g.bumps().empty()) {
    rep.sigma = s.lambda_u();
    rep.m = 1;
  } else {
    for (std::size_t bi = 0; bi < g.bumps().size(); ++bi) {
      const auto& b = g.bumps()[bi];
      const auto& eb = s.blocks()[static_cast<std::size_t>(b.block)];
      BlockSetup bs;
      bs.bump = static_cast<int>(bi);
      bs.stable_type = eb.stable;
      bs.lambda = eb.modulus;
      const auto pts = detail::ball_sample(g, b, samples, 1.0);
      rep.samples += pts.size();
      std::vector<double> vals(pts.size());
      parallel_for(pts.size(), [&](std::size_t i) {
        vals[i] = eb.stable ? central_derivative_norm(g, static_cast<int>(bi), pts[i])
                            : central_derivative_conorm(g, static_cast<int>(bi), pts[i]);
      });
      vals.push_back(eb.modulus);  // value outside the ball
      bs.sigma = eb.stable ? *std::max_element(vals.begin(), vals.end())
                           : *std::min_element(vals.begin(), vals.end());
      require(bs.sigma > 1e-12, ErrorKind::NoFiniteM, "central derivative vanishes");
      double prod = bs.sigma;
      for (bs.m = 1; bs.m <= 10000; ++bs.m) {
        prod *= eb.modulus;
        if (eb.stable ? prod < 1.0 : prod > 1.0) break;
      }
      require(bs.m <= 10000, ErrorKind::NoFiniteM, "no finite m within 10000 iterates");
      rep.blocks.push_back(bs);
      rep.m = std::max(rep.m, bs.m);
    }
    rep.sigma = rep.blocks.front().sigma;
  }
  // Haar(M \ B(p, rho)) >= 1 - 1/(2m).
  rep.rho = std::pow(1.0 / (2.0 * rep.m * adapted_ball_volume(s, 1.0)), 1.0 / s.dim());
  rep.ok = 2.0 * rep.C * r < rep.rho / 2.0;
  return rep;
}

struct DistortionReport {
  double max_ratio = 1.0;
  double bound = 0.0;  // a^{-1/4}
  bool ok = false;
  std::size_t pairs = 0;
};

// Ratio of central derivatives over sampled pairs closer than 2Cr, near each bump.
inline DistortionReport central_distortion(const DAMap& g, std::size_t pairs = 10000,
                                           std::uint64_t seed = 1) {
  const auto& s = g.splitting();
  DistortionReport rep;
  rep.bound = std::pow(s.a(), -0.25);
  const double two_cr = 2.0 * g.displacement_bound() / (1.0 - s.a());
  Rng rng(seed);
  const int n = g.dim();
  for (std::size_t bi = 0; bi < g.bumps().size(); ++bi) {
    const auto& b = g.bumps()[bi];
    std::vector<Vec> xs, ys;
    for (std::size_t i = 0; i < pairs; ++i) {
      const Vec cx = rng.uniform_vec(n, -1.5 * b.radius, 1.5 * b.radius);
      Vec dir = rng.uniform_vec(n, -1.0, 1.0);
      dir /= std::max(s.coord_norm(dir), 1e-300);
      const Vec cy = cx + rng.uniform(0.0, two_cr) * dir;
      xs.push_back(reduce(b.center + s.basis() * cx));
      ys.push_back(reduce(b.center + s.basis() * cy));
    }
    std::vector<double> ratio(pairs);
    parallel_for(pairs, [&](std::size_t i) {
      const double dx = central_derivative_norm(g, static_cast<int>(bi), xs[i]);
      const double dy = central_derivative_norm(g, static_cast<int>(bi), ys[i]);
      ratio[i] = std::max(dx / dy, dy / dx);
    });
    rep.pairs += pairs;
    for (double v : ratio) rep.max_ratio = std::max(rep.max_ratio, v);
  }
  rep.ok = rep.max_ratio < rep.bound;
  return rep;
}

struct CentralNormReport {
  double max_norm = 0.0;
  double fraction_above_one = 0.0;
  double exclusion = 0.0;
  std::size_t samples = 0;
  bool ok = false;
};

// sup ||Dg|E^c|| over ball samples whose central coordinates are at least `exclusion` away
// from the local unstable manifold of the center.
inline CentralNormReport central_norm_off_unstable(const DAMap& g, double exclusion,
                                                   std::size_t samples = 20000) {
  CentralNormReport rep;
  rep.exclusion = exclusion;
  std::size_t above = 0;
  for (std::size_t bi = 0; bi < g.bumps().size(); ++bi) {
    const auto& b = g.bumps()[bi];
    const auto& eb = g.splitting().blocks()[static_cast<std::size_t>(b.block)];
    const auto pts = detail::ball_sample(g, b, samples, 1.0);
    std::vector<double> vals(pts.size(), -1.0);
    parallel_for(pts.size(), [&](std::size_t i) {
      const Vec c = g.local_coords(static_cast<int>(bi), pts[i]).segment(eb.offset, eb.size);
      if (c.norm() <= exclusion) return;
      vals[i] = central_derivative_norm(g, static_cast<int>(bi), pts[i]);
    });
    for (double v : vals) {
      if (v < 0) continue;
      ++rep.samples;
      rep.max_norm = std::max(rep.max_norm, v);
      if (v > 1.0) ++above;
    }
  }
  rep.fraction_above_one = rep.samples ? static_cast<double>(above) / static_cast<double>(rep.samples) : 0.0;
  rep.ok = rep.max_norm <= 1.0;
  return rep;
}

struct LocalProduct {
  Vec z;               // W^cs_eps(x) intersected with W^uu_eps(y)
  bool converged = false;
  bool within = false;  // z lies in both eps-plaques
  int depth = 0;        // backward iterates used
  double increment = 0.0;
  double dist_x = 0.0;
  double dist_y = 0.0;
};

// The cs-leaves of these maps are the affine planes with fixed strong-unstable coordinates;
// the strong-unstable leaf through y is obtained by pulling back N steps, seeding the
// strong-unstable offset and pushing forward, deepening N until the point stabilizes.
inline LocalProduct local_product_point(const DAMap& g, const Vec& x, const Vec& y, double eps,
                                        double tol = 1e-8, int max_depth = 200) {
  const auto& s = g.splitting();
  const int n = s.dim(), ds = s.stable_dim();
  std::vector<char> central(static_cast<std::size_t>(n), 0);
  for (int k : g.central_coordinates()) central[static_cast<std::size_t>(k)] = 1;
  const Vec y0 = reduce(y);
  const Vec Dxy = s.coords(g.metric().difference(reduce(x), y0));
  Vec target = Vec::Zero(n);
  for (int k = ds; k < n; ++k)
    if (!central[static_cast<std::size_t>(k)]) target[k] = Dxy[k];

  LocalProduct out;
  Vec prev;
  const Mat Li = s.block_matrix_inverse();
  for (int N = 10; N <= max_depth; N += 10) {
    std::vector<Vec> orbit{y0};
    for (int k = 0; k < N; ++k) orbit.push_back(g.eval_inverse(orbit.back()));
    Vec D = target;
    for (int k = 0; k < N; ++k) D = Li * D;
    for (int k = N; k >= 1; --k) D = g.offset_forward(orbit[static_cast<std::size_t>(k)], D);
    out.depth = N;
    if (prev.size() == D.size()) {
      out.increment = s.coord_norm(D - prev);
      if (out.increment < tol) {
        out.converged = true;
        prev = D;
        break;
      }
    }
    prev = D;
  }
  out.z = reduce(y0 + s.from_coords(prev));
  out.dist_y = s.coord_norm(prev);
  out.dist_x = g.metric().distance(out.z, x);
  out.within = out.dist_x < eps && out.dist_y < eps;
  return out;
}

}  // namespace anosov

#include <gtest/gtest.h>

#include "anosov/hypotheses.hpp"
#include "anosov/sampling.hpp"
#include "anosov/torus_maps.hpp"
#include "fixtures.hpp"

using namespace anosov;

namespace {

ErrorKind build_error(const ToralAutomorphism& m, const DAParams& p) {
  try {
    build_da(m, p);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

// Points outside every perturbation ball, in the adapted local coordinates of each bump.
std::vector<Vec> outside_points(const DAMap& g, std::size_t count) {
  std::vector<Vec> out;
  for (const auto& x : halton_points(count, g.dim())) {
    bool inside = false;
    for (std::size_t b = 0; b < g.bumps().size(); ++b)
      inside = inside || g.local_coords(static_cast<int>(b), x).norm() < g.bumps()[b].radius;
    if (!inside) out.push_back(x);
  }
  return out;
}

}  // namespace

TEST(LinearMap, CatFixedPoint) {
  const auto f = linear_map(fixtures::cat());
  EXPECT_EQ(f->eval(Vec::Zero(2)), Vec::Zero(2));
}

TEST(LinearMap, CatHalfPoint) {
  const auto f = linear_map(fixtures::cat());
  Vec x(2), y(2);
  x << 0.5, 0.5;
  y << 0.5, 0.0;
  EXPECT_EQ(f->eval(x), y);
}

TEST(LinearMap, InverseRoundTrip) {
  Rng rng(4);
  for (const auto& m : {fixtures::cat(), fixtures::three_real(), fixtures::four_real()}) {
    const auto f = linear_map(m);
    for (int t = 0; t < 100; ++t) {
      const Vec x = rng.uniform_vec(m.dim());
      EXPECT_LT(wrap(f->eval_inverse(f->eval(x)) - x).norm(), 1e-12);
    }
  }
}

TEST(Mane, EqualsLinearOutsideBall) {
  const auto g = fixtures::mane();
  LinearMap f(fixtures::three_real());
  const auto pts = outside_points(*g, 2000);
  ASSERT_GT(pts.size(), 1900u);
  for (const auto& x : pts) EXPECT_EQ(g->eval(x), f.eval(x));
}

TEST(Mane, FixesCenterAndContractsCentrally) {
  const auto g = fixtures::mane();
  EXPECT_EQ(g->eval(Vec::Zero(3)), Vec::Zero(3));
  EXPECT_LT(central_derivative_norm(*g, 0, Vec::Zero(3)), 1.0);
}

TEST(Mane, WeakStrengthRejected) {
  auto p = fixtures::mane_params();
  p.strength = 0.2;  // 1.555 (1 - 0.2) > 1: p stays a central repeller
  EXPECT_EQ(build_error(fixtures::three_real(), p), ErrorKind::StrengthTooWeak);
}

TEST(Mixed, EqualsLinearOutsideBothBalls) {
  const auto g = fixtures::mixed();
  LinearMap f(fixtures::four_real());
  for (const auto& x : outside_points(*g, 2000)) EXPECT_EQ(g->eval(x), f.eval(x));
  EXPECT_EQ(g->bumps().size(), 2u);
}

TEST(Hopf, EqualsLinearOutsideBall) {
  const auto g = fixtures::hopf();
  LinearMap f(fixtures::real_complex());
  for (const auto& x : outside_points(*g, 2000)) EXPECT_EQ(g->eval(x), f.eval(x));
}

TEST(Hopf, CenterIsPlanarRepeller) {
  const auto g = fixtures::hopf();
  EXPECT_EQ(g->eval(Vec::Zero(3)), Vec::Zero(3));
  EXPECT_GT(central_derivative_conorm(*g, 0, Vec::Zero(3)), 1.0);
}

TEST(Hopf, WeakStrengthRejected) {
  auto p = fixtures::hopf_params();
  p.strength = 0.1;  // 0.869 * 1.1 < 1
  EXPECT_EQ(build_error(fixtures::real_complex(), p), ErrorKind::StrengthTooWeak);
}

TEST(DAMaps, InverseRoundTrip) {
  Rng rng(8);
  for (const auto& g : {fixtures::mane(), fixtures::hopf(), fixtures::mixed()}) {
    for (int t = 0; t < 300; ++t) {
      Vec x = rng.uniform_vec(g->dim());
      if (t % 2 == 0) x = reduce(g->bumps()[0].center + rng.uniform_vec(g->dim(), -0.05, 0.05));
      EXPECT_LT(g->metric().distance(g->eval_inverse(g->eval(x)), x), 1e-10);
    }
  }
}

TEST(DAMaps, DerivativeMatchesFiniteDifferences) {
  for (const auto& g : {fixtures::mane(), fixtures::hopf(), fixtures::mixed()}) {
    const auto c = derivative_check(*g, 300);
    EXPECT_TRUE(c.ok) << g->describe() << " " << c.max_error << " " << c.max_error_half;
  }
}

TEST(C0Distance, ZeroForUnperturbedMap) {
  LinearMap f(fixtures::cat());
  EXPECT_EQ(c0_distance(f, f, 1000, TorusMetric::adapted(spectral_split(fixtures::cat()))), 0.0);
}

TEST(C0Distance, ManeBelowRadius) {
  const auto g = fixtures::mane();
  const double d = c0_distance(*g, 4000);
  EXPECT_GT(d, 0.0);
  EXPECT_LT(d, 0.05);
}

TEST(C0Distance, TranslationIsConstantDisplacement) {
  const auto A = fixtures::cat();
  const auto s = spectral_split(A);
  Vec v(2);
  v << 0.01, -0.004;
  auto f = linear_map(A);
  TranslatedMap t(f, v);
  EXPECT_NEAR(c0_distance(*f, t, 500, TorusMetric::adapted(s)), adapted_norm(s, v), 1e-12);
}

TEST(H3Setup, LinearMap) {
  const auto g = DAMap::linear(fixtures::three_real());
  const auto r = verify_h3_setup(*g, 1e-3);
  EXPECT_NEAR(r.sigma, 1.5550, 1e-3);
  EXPECT_EQ(r.m, 1);
  EXPECT_TRUE(r.ok);
}

TEST(H3Setup, ManeNeedsTwoSteps) {
  const auto g = fixtures::mane();
  const auto r = verify_h3_setup(*g, g->displacement_bound());
  const double lu = r.blocks.front().lambda;
  EXPECT_LE(r.sigma * lu, 1.0);
  EXPECT_GT(r.sigma * lu * lu, 1.0);
  EXPECT_EQ(r.m, 2);
  EXPECT_TRUE(std::isfinite(r.rho));
  EXPECT_TRUE(r.ok);
}

TEST(H3Setup, FieldsFiniteNearThreshold) {
  auto p = fixtures::mane_params();
  p.strength = 0.37;
  const auto g = build_da(fixtures::three_real(), p);
  const auto r = verify_h3_setup(*g, g->displacement_bound(), 5000);
  EXPECT_TRUE(std::isfinite(r.sigma) && std::isfinite(r.rho));
  EXPECT_GE(r.m, 1);
}

TEST(Diagnostics, MixedDistortionAndHopfNormAreReported) {
  const auto dist = central_distortion(*fixtures::mixed(), 2000);
  EXPECT_GT(dist.pairs, 0u);
  EXPECT_GE(dist.max_ratio, 1.0);
  const auto nrm = central_norm_off_unstable(*fixtures::hopf(), 0.0, 2000);
  EXPECT_GT(nrm.samples, 0u);
  EXPECT_GT(nrm.max_norm, 0.0);
}

TEST(LocalProduct, NearbyPairsConverge) {
  const auto g = fixtures::mane();
  Rng rng(12);
  const double eps = 0.05;
  int valid = 0;
  for (int t = 0; t < 60; ++t) {
    const Vec x = rng.uniform_vec(3);
    const Vec y = reduce(x + rng.uniform_vec(3, -0.004, 0.004));
    const auto lp = local_product_point(*g, x, y, eps);
    EXPECT_TRUE(lp.converged);
    valid += lp.within;
  }
  EXPECT_EQ(valid, 60);
}

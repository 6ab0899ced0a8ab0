#include <gtest/gtest.h>

#include "anosov/hyperbolic_linear.hpp"
#include "anosov/sampling.hpp"
#include "fixtures.hpp"

#include <cmath>

using namespace anosov;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

// Real roots of a monic cubic x^3 + b x^2 + c x + d by bisection on sign changes.
std::vector<double> cubic_real_roots(double b, double c, double d) {
  auto p = [&](double x) { return ((x + b) * x + c) * x + d; };
  std::vector<double> roots;
  double prev = -10.0;
  for (int i = 1; i <= 20000; ++i) {
    const double x = -10.0 + 20.0 * i / 20000;
    if ((p(prev) < 0) != (p(x) < 0)) {
      double lo = prev, hi = x;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((p(mid) < 0) == (p(lo) < 0) ? lo : hi) = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = x;
  }
  return roots;
}

}  // namespace

TEST(Spectrum, CatMapClosedForm) {
  const auto s = spectral_split(fixtures::cat());
  const double lu = (3.0 + std::sqrt(5.0)) / 2.0;
  EXPECT_NEAR(s.lambda_u(), lu, 1e-12);
  EXPECT_NEAR(s.lambda_s(), 1.0 / lu, 1e-12);
  EXPECT_GE(s.a(), s.lambda_s());
  EXPECT_LT(s.a(), s.lambda_s() + 1e-6);
  EXPECT_EQ(s.stable_dim(), 1);
}

TEST(Spectrum, IdentityIsNotHyperbolic) {
  EXPECT_EQ(kind_of([] { spectral_split(ToralAutomorphism::from_rows({{1, 0}, {0, 1}})); }), ErrorKind::NotHyperbolic);
}

TEST(Spectrum, DeterminantTwoIsNotUnimodular) {
  EXPECT_EQ(kind_of([] { ToralAutomorphism::from_rows({{2, 0}, {0, 1}}); }), ErrorKind::NotUnimodular);
}

TEST(Spectrum, RotationIsNotHyperbolic) {
  EXPECT_EQ(kind_of([] { spectral_split(ToralAutomorphism::from_rows({{0, -1}, {1, 0}})); }), ErrorKind::NotHyperbolic);
}

TEST(Spectrum, RealPlusComplexCompanion) {
  const auto s = spectral_split(fixtures::real_complex());
  const auto roots = cubic_real_roots(0.0, -1.0, -1.0);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_NEAR(s.lambda_u(), roots[0], 1e-10);
  EXPECT_NEAR(roots[0], 1.3247, 1e-4);
  EXPECT_EQ(s.stable_dim(), 2);
  // Product of moduli is 1.
  EXPECT_NEAR(s.blocks().front().modulus, 1.0 / std::sqrt(roots[0]), 1e-10);
  EXPECT_NEAR(s.blocks().front().modulus, 0.8689, 1e-4);
}

TEST(Spectrum, ThreeRealCompanionMatchesRootOracle) {
  const auto s = spectral_split(fixtures::three_real());
  const auto roots = cubic_real_roots(-5.0, 6.0, -1.0);
  ASSERT_EQ(roots.size(), 3u);
  std::vector<double> mods;
  for (const auto& l : s.eigenvalues()) mods.push_back(std::abs(l));
  std::sort(mods.begin(), mods.end());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(mods[static_cast<std::size_t>(i)], roots[static_cast<std::size_t>(i)], 1e-10);
}

TEST(AdaptedNorm, ZeroVector) {
  const auto s = spectral_split(fixtures::cat());
  EXPECT_EQ(adapted_norm(s, Vec::Zero(2)), 0.0);
}

TEST(AdaptedNorm, UnitStableEigenvector) {
  for (const auto& m : {fixtures::cat(), fixtures::three_real(), fixtures::real_complex()}) {
    const auto s = spectral_split(m);
    Vec c = Vec::Zero(s.dim());
    c[0] = 1.0;
    EXPECT_NEAR(adapted_norm(s, s.from_coords(c)), 1.0, 1e-12);
  }
}

TEST(AdaptedNorm, PropertiesOnRandomVectors) {
  Rng rng(11);
  for (const auto& m : {fixtures::cat(), fixtures::three_real(), fixtures::real_complex(), fixtures::four_real()}) {
    const auto s = spectral_split(m);
    const Mat A = m.real();
    const Mat Ai = m.inverse_matrix().cast<double>();
    for (int t = 0; t < 200; ++t) {
      const Vec v = rng.uniform_vec(s.dim(), -1.0, 1.0), w = rng.uniform_vec(s.dim(), -1.0, 1.0);
      const double c = rng.uniform(-3.0, 3.0);
      EXPECT_NEAR(adapted_norm(s, c * v), std::abs(c) * adapted_norm(s, v), 1e-12);
      EXPECT_LE(adapted_norm(s, v + w), adapted_norm(s, v) + adapted_norm(s, w) + 1e-12);
      const Vec vs = s.stable_projector() * v, vu = s.unstable_projector() * v;
      EXPECT_LT((vs + vu - v).norm(), 1e-12);
      EXPECT_LE(adapted_norm(s, A * vs), s.a() * adapted_norm(s, vs) + 1e-12);
      EXPECT_LE(adapted_norm(s, Ai * vu), s.a() * adapted_norm(s, vu) + 1e-12);
    }
  }
}

TEST(FindExample, ThreeRealOrdered) {
  const auto found = find_example_matrix(3, SpectrumShape::THREE_REAL_ORDERED, 6);
  bool has = false;
  for (const auto& m : found) has = has || m == fixtures::three_real();
  EXPECT_TRUE(has);
  for (const auto& m : found) EXPECT_TRUE(matches_shape(m.matrix(), SpectrumShape::THREE_REAL_ORDERED));
}

TEST(FindExample, RealPlusComplexStable) {
  const auto found = find_example_matrix(3, SpectrumShape::REAL_PLUS_COMPLEX_STABLE, 2);
  bool has = false;
  for (const auto& m : found) has = has || m == fixtures::real_complex();
  EXPECT_TRUE(has);
}

TEST(FindExample, ImpossibleShapeGivesEmptyList) {
  EXPECT_TRUE(find_example_matrix(2, SpectrumShape::THREE_REAL_ORDERED, 2).empty());
}

TEST(FindExample, FourRealTwoEachSide) {
  EXPECT_TRUE(matches_shape(fixtures::four_real().matrix(), SpectrumShape::FOUR_REAL_TWO_EACH_SIDE));
}

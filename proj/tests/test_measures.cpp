#include <gtest/gtest.h>

#include "anosov/measures.hpp"
#include "anosov/sampling.hpp"
#include "fixtures.hpp"

#include <complex>

using namespace anosov;

namespace {

double max_nonzero(const FourierDiagnostics& F) {
  double m = 0.0;
  for (std::size_t i = 0; i < F.modes.size(); ++i) {
    bool zero = true;
    for (int k : F.modes[i]) zero = zero && k == 0;
    if (!zero) m = std::max(m, std::abs(F.coefficients[i]));
  }
  return m;
}

}  // namespace

TEST(MuN, CatFixedPointIsDirac) {
  const auto mu = mu_n(fixtures::cat(), 1);
  ASSERT_EQ(mu.size(), 1u);
  EXPECT_EQ(mu.atoms[0], Vec::Zero(2));
  EXPECT_EQ(mu.weights[0], 1.0);
}

TEST(MuN, CatPeriodTwoHasFiveEqualAtoms) {
  const auto mu = mu_n(fixtures::cat(), 2);
  ASSERT_EQ(mu.size(), 5u);
  for (double w : mu.weights) EXPECT_EQ(w, 0.2);
  EXPECT_TRUE(mu.exact());
}

TEST(NuN, UnperturbedMapReproducesMuN) {
  const auto A = fixtures::three_real();
  const auto g = DAMap::linear(A);
  const SemiconjugacyField h(g, 1e-9);
  for (int n = 1; n <= 4; ++n) {
    const auto ps = per_n_linear(A, n);
    const auto nu = merge_atoms(nu_n(per_n_da(*g, ps, h, 1e-10)));
    const auto mu = merge_atoms(mu_n(ps));
    ASSERT_EQ(nu.size(), mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      EXPECT_LT(wrap(nu.atoms[i] - mu.atoms[i]).norm(), 1e-12);
      EXPECT_NEAR(nu.weights[i], mu.weights[i], 1e-15);
    }
    EXPECT_EQ(nu.completeness, 1.0);
  }
}

TEST(Fourier, DiracAtOriginIsAllOnes) {
  const auto F = fourier(dirac(Vec::Zero(3)), 3);
  for (const auto& c : F.coefficients) {
    EXPECT_EQ(c.real(), 1.0);
    EXPECT_EQ(c.imag(), 0.0);
  }
}

TEST(Fourier, CatPeriodTwoRootOfUnitySums) {
  // Per_2 is the cyclic group generated by v = (a, b)/5; mu_2-hat(k) = 1 if 5 | k.(a, b), else 0.
  const auto A = fixtures::cat();
  std::int64_t ga = -1, gb = -1;
  for (std::int64_t a = 0; a < 5 && ga < 0; ++a)
    for (std::int64_t b = 0; b < 5; ++b) {
      if (a == 0 && b == 0) continue;
      if ((4 * a + 3 * b) % 5 == 0 && (3 * a + 1 * b) % 5 == 0) {  // (A^2 - I) v integral
        ga = a;
        gb = b;
        break;
      }
    }
  ASSERT_GE(ga, 0);
  const auto F = fourier(mu_n(A, 2), 4);
  for (std::size_t i = 0; i < F.modes.size(); ++i) {
    const auto& k = F.modes[i];
    const double expect = ((k[0] * ga + k[1] * gb) % 5 == 0) ? 1.0 : 0.0;
    EXPECT_NEAR(F.coefficients[i].real(), expect, 1e-14);
    EXPECT_NEAR(F.coefficients[i].imag(), 0.0, 1e-14);
  }
}

TEST(Fourier, HaarSampleHasSmallModes) {
  Rng rng(31);
  std::vector<Vec> pts;
  for (int i = 0; i < 100000; ++i) pts.push_back(rng.uniform_vec(2));
  EXPECT_LT(max_nonzero(fourier(uniform_measure(pts), 3)), 0.02);
}

TEST(Fourier, StructuralPropertiesOnRandomMeasures) {
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const int dim = 2 + t % 3;
    std::vector<Vec> pts;
    const int count = 1 + static_cast<int>(rng.uniform(0, 60));
    for (int i = 0; i < count; ++i) pts.push_back(rng.uniform_vec(dim));
    const auto F = fourier(uniform_measure(pts), 2);
    for (std::size_t i = 0; i < F.modes.size(); ++i) {
      std::vector<int> neg;
      for (int k : F.modes[i]) neg.push_back(-k);
      const auto c = F.coefficients[i], cn = F.at(neg);
      EXPECT_NEAR(c.real(), cn.real(), 1e-13);
      EXPECT_NEAR(c.imag(), -cn.imag(), 1e-13);
      EXPECT_LE(std::abs(c), 1.0 + 1e-12);
    }
    EXPECT_NEAR(F.at(std::vector<int>(static_cast<std::size_t>(dim), 0)).real(), 1.0, 1e-12);
  }
}

TEST(Pushforward, IdentitySemiconjugacyReturnsInput) {
  const auto A = fixtures::three_real();
  const SemiconjugacyField h(DAMap::linear(A), 1e-9);
  const auto mu = mu_n(A, 3);
  const auto out = pushforward(h, mu);
  const auto ref = merge_atoms(mu);
  ASSERT_EQ(out.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    EXPECT_EQ(out.atoms[i], ref.atoms[i]);
    EXPECT_NEAR(out.weights[i], ref.weights[i], 1e-15);
  }
}

TEST(Pushforward, TwoAtomsOnOneFiberMerge) {
  const auto g = fixtures::mane();
  const SemiconjugacyField h(g, 1e-9);
  const auto cl = single_central_line(*g);
  ASSERT_TRUE(cl.has_value());
  const auto roots = central_periodic_offsets(*g, *cl, {Vec::Zero(3)}, h.conjugacy_bound());
  ASSERT_EQ(roots.size(), 3u);
  Vec c = Vec::Zero(3);
  c[cl->coord] = roots.back();
  // p_+ repels along the center faster than A expands, so h is only Hoelder there: ~1e-7 accuracy.
  const auto out = pushforward(h, uniform_measure({Vec::Zero(3), reduce(g->splitting().from_coords(c))}), 1e-6);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_NEAR(out.weights[0], 1.0, 1e-15);
}

TEST(Pushforward, MuNIsInvariantUnderTheLinearMap) {
  const auto A = fixtures::three_real();
  const auto mu = mu_n(A, 4);
  const auto img = pushforward(LinearMap(A), mu);
  EXPECT_LT(max_mode_gap(fourier(mu, 2), fourier(img, 2)), 1e-12);
}

TEST(Pushforward, ManeIdentityOnModes) {
  const auto A = fixtures::three_real();
  const auto g = fixtures::mane();
  const SemiconjugacyField h(g, 1e-9);
  for (int n = 1; n <= 5; ++n) {
    const auto ps = per_n_linear(A, n);
    const auto push = pushforward(h, nu_n(per_n_da(*g, ps, h, 1e-10)));
    EXPECT_LT(max_mode_gap(fourier(mu_n(ps), 3), fourier(push, 3)), 1e-6) << n;
  }
}

TEST(MergeAtoms, SumsDuplicateWeights) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<Vec> pts;
    const int distinct = 1 + t % 7;
    for (int i = 0; i < distinct; ++i) pts.push_back(rng.uniform_vec(3, 0.01, 0.99));
    std::vector<Vec> atoms;
    for (int i = 0; i < 30; ++i) atoms.push_back(pts[static_cast<std::size_t>(i % distinct)] + Vec::Constant(3, 1e-11 * (i % 3)));
    const auto m = merge_atoms(uniform_measure(atoms));
    EXPECT_EQ(m.size(), static_cast<std::size_t>(distinct));
    EXPECT_NEAR(m.total_weight(), 1.0, 1e-14);
  }
}

TEST(Convergence, ConstantSequence) {
  const auto mu = mu_n(fixtures::cat(), 3);
  const auto rep = convergence_report({mu, mu, mu, mu}, 3);
  for (double d : rep.distances) EXPECT_EQ(d, 0.0);
}

TEST(Convergence, CatMuNEquidistributes) {
  std::vector<EmpiricalMeasure> seq;
  for (int n = 2; n <= 10; ++n) seq.push_back(mu_n(fixtures::cat(), n));
  const auto rep = convergence_report(seq, 3);
  EXPECT_GT(rep.max_nonzero_mode.front(), 0.5);
  for (std::size_t i = 1; i < rep.max_nonzero_mode.size(); ++i) EXPECT_LT(rep.max_nonzero_mode[i], 1e-12);
}

TEST(Convergence, ManeNuNTrend) {
  const auto A = fixtures::three_real();
  const auto g = fixtures::mane();
  const SemiconjugacyField h(g, 1e-9);
  std::vector<EmpiricalMeasure> seq;
  for (int n = 2; n <= 8; ++n) seq.push_back(nu_n(per_n_da(*g, per_n_linear(A, n), h, 1e-10)));
  const auto rep = convergence_report(seq, 3);
  EXPECT_LT(rep.final_to_first, 0.5);
  EXPECT_LT(rep.trend_slope, 0.0);
  EXPECT_LT(rep.distances[1], rep.distances[0]);
}

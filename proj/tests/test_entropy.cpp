#include <gtest/gtest.h>

#include "anosov/entropy.hpp"
#include "anosov/sampling.hpp"
#include "fixtures.hpp"

#include <cmath>

using namespace anosov;

namespace {

double log_spectral_sum(const ToralAutomorphism& A) {
  const auto split = spectral_split(A);
  double s = 0.0;
  for (const auto& l : split.eigenvalues()) s += std::max(0.0, std::log(std::abs(l)));
  return s;
}

}  // namespace

TEST(SeparatedCount, LargeEpsilonGivesOnePoint) {
  const auto f = DAMap::linear(fixtures::cat());
  EXPECT_EQ(separated_count(*f, halton_points(500, 2), 1, 10.0).count, 1u);
}

TEST(SeparatedCount, PointsFartherThanEpsilonAreAllKept) {
  const auto f = DAMap::linear(fixtures::cat());
  const auto K = grid_points(4, 2);
  EXPECT_EQ(separated_count(*f, K, 1, 0.01).count, K.size());
}

TEST(SeparatedCount, NondecreasingInNAndNonincreasingInEps) {
  const auto g = fixtures::mane();
  const auto K = halton_points(3000, 3);
  const OrbitTable T(*g, K, 6);
  std::vector<std::size_t> last;
  for (double eps : {0.1, 0.2, 0.3}) {
    const auto c = separated_counts(T, 6, eps, g->metric());
    for (std::size_t i = 1; i < c.size(); ++i) EXPECT_GE(c[i].count, c[i - 1].count);
    std::vector<std::size_t> now;
    for (const auto& x : c) now.push_back(x.count);
    if (!last.empty()) {
      for (std::size_t i = 0; i < now.size(); ++i) EXPECT_LE(now[i], last[i]) << eps;
    }
    last = now;
  }
}

TEST(HTop, CatMapWithinTenPercent) {
  const auto f = DAMap::linear(fixtures::cat());
  const auto e = h_top_estimate(*f, halton_points(10000, 2), 1, 16, {0.02, 0.03, 0.04, 0.05});
  const double exact = std::log((3.0 + std::sqrt(5.0)) / 2.0);
  EXPECT_NEAR(e.value, exact, 0.10 * exact);
}

TEST(HTop, ThreeTorusLinearAndManeAgree) {
  const auto A = fixtures::three_real();
  const auto K = halton_points(20000, 3);
  const std::vector<double> eps{0.1, 0.15, 0.2, 0.25};
  const auto ef = h_top_estimate(*DAMap::linear(A), K, 1, 8, eps);
  const auto eg = h_top_estimate(*fixtures::mane(), K, 1, 8, eps);
  const double ref = log_spectral_sum(A);
  EXPECT_NEAR(ref, 1.6192, 1e-4);
  EXPECT_NEAR(ef.value, ref, 0.15 * ref);
  EXPECT_NEAR(eg.value, ef.value, 0.15 * ef.value);
}

TEST(HTop, BudgetExceeded) {
  const auto f = DAMap::linear(fixtures::cat());
  try {
    h_top_estimate(*f, halton_points(1000, 2), 1, 10, {0.05}, 5000);
    FAIL() << "expected BudgetExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
}

TEST(HTop, InvalidRanges) {
  const auto f = DAMap::linear(fixtures::cat());
  const auto K = halton_points(100, 2);
  EXPECT_THROW(h_top_estimate(*f, K, 3, 2, {0.1}), Error);
  EXPECT_THROW(h_top_estimate(*f, K, 1, 4, {}), Error);
}

TEST(FitGrowth, ExactExponentialRecovered) {
  std::vector<SeparatedCount> c;
  for (int n = 1; n <= 6; ++n) c.push_back({n, 0.1, static_cast<std::size_t>(std::llround(std::pow(3.0, n))), 100000});
  const auto f = fit_growth(c, 1, 100000);
  EXPECT_NEAR(f.slope, std::log(3.0), 1e-3);
  EXPECT_EQ(f.points, 6);
}

TEST(ClassScan, TrivialClassCountsOne) {
  const auto A = fixtures::three_real();
  const auto g = DAMap::linear(A);
  const double alpha = g->splitting().expansivity_constant();
  const auto cls = class_members(*g, Vec::Zero(3), alpha, 20, alpha / 10.0);
  for (const auto& e : class_entropy_scan(*g, cls, 10, 0.01, 0.0)) {
    EXPECT_EQ(e.count.count, 1u);
    EXPECT_TRUE(e.within);
  }
}

TEST(ClassScan, ManeClassStaysWithinEnvelope) {
  const auto g = fixtures::mane();
  const SemiconjugacyField h(g, 1e-9);
  const double alpha = g->splitting().expansivity_constant();
  const auto cls = class_members(*g, Vec::Zero(3), alpha, 60, alpha / 10.0 * 0.05);
  const double two_cr = 2.0 * h.conjugacy_bound();
  const auto scan = class_entropy_scan(*g, cls, 30, h.conjugacy_bound() / 5.0, two_cr);
  for (const auto& e : scan) EXPECT_TRUE(e.within) << e.count.n;
  EXPECT_LT(class_growth_rate(scan), 0.05);
}

// The Hopf class is a disc, so the linear envelope does not apply; its counts saturate as it shrinks.
TEST(ClassScan, HopfClassCountsSaturate) {
  const auto g = fixtures::hopf();
  const SemiconjugacyField h(g, 1e-9);
  const auto& s = g->splitting();
  const double alpha = s.expansivity_constant();
  Vec c = Vec::Zero(3);
  c[s.dim() - 1] = 5e-3;
  const auto cls = class_members(*g, reduce(s.from_coords(c)), alpha, 60, alpha / 10.0 * 0.05);
  ASSERT_GT(cls.members.size(), 10u);
  const auto scan = class_entropy_scan(*g, cls, 30, h.conjugacy_bound() / 5.0, 2.0 * h.conjugacy_bound());
  EXPECT_EQ(scan.back().count.count, scan[14].count.count);
  EXPECT_EQ(class_growth_rate(scan), 0.0);
}

TEST(PeriodicGrowth, ConstantCountsGiveZero) {
  EXPECT_EQ(periodic_growth_rate({{1, 1.0}, {2, 1.0}, {3, 1.0}}).value, 0.0);
  EXPECT_THROW(periodic_growth_rate({{1, 1.0}, {2, 1.0}}), Error);
}

TEST(PeriodicGrowth, ThreeTorusNearSpectralSum) {
  const auto A = fixtures::three_real();
  std::vector<std::pair<int, double>> per;
  for (int n = 1; n <= 6; ++n) per.emplace_back(n, static_cast<double>(per_n_linear(A, n).count()));
  EXPECT_EQ(per[5].second, 15379.0);
  const double ref = log_spectral_sum(A);
  EXPECT_NEAR(periodic_growth_rate(per).value, ref, 0.03 * ref);
}

TEST(PeriodicGrowth, CatMapTenthPeriod) {
  std::vector<std::pair<int, double>> per;
  for (int n = 1; n <= 10; ++n) per.emplace_back(n, static_cast<double>(per_n_linear(fixtures::cat(), n).count()));
  EXPECT_EQ(per.back().second, 15125.0);
  EXPECT_NEAR(periodic_growth_rate(per).value, std::log((3.0 + std::sqrt(5.0)) / 2.0), 0.002);
}

TEST(Dashboard, EqualEntropiesNoViolation) {
  const auto d = inequality_dashboard(1.0, 1.0, {0.0}, 0.0);
  EXPECT_FALSE(d.violation);
  EXPECT_EQ(d.symmetric_gap, 0.0);
}

TEST(Dashboard, DoubledEntropyFlagsViolation) {
  const auto d = inequality_dashboard(1.0, 2.0, {0.0}, 0.0);
  EXPECT_TRUE(d.violation);
  EXPECT_LT(d.bowen_slack, 0.0);
  EXPECT_GT(d.lw_gap, 0.0);
}

TEST(Dashboard, RandomSlackSigns) {
  Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    const double f = rng.uniform(0.1, 2.0), g = rng.uniform(0.1, 2.0), c = rng.uniform(0.0, 0.5);
    const auto d = inequality_dashboard(f, g, {c}, 0.0);
    EXPECT_NEAR(d.bowen_slack, f + c - g, 1e-15);
    EXPECT_NEAR(d.lw_slack, c - (g - f), 1e-15);
    EXPECT_EQ(d.violation, d.bowen_slack < -d.tolerance || d.lw_slack < -d.tolerance);
  }
}

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srv/errors.hpp"
#include "srv/rng.hpp"
#include "srv/simplex_projection.hpp"

namespace srv {
namespace {

std::vector<double> random_vector(Rng& rng, std::size_t d, double hi = 10.0) {
  std::vector<double> v(d);
  for (auto& x : v) x = rng.uniform(0.0, hi);
  return v;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(ProjectSorted, TwoDimPoints) {
  const auto p = project_sorted(std::vector{1.5, 1.0});
  EXPECT_DOUBLE_EQ(p.point.values[0], 0.75);
  EXPECT_DOUBLE_EQ(p.point.values[1], 0.25);
  EXPECT_DOUBLE_EQ(p.diagnostics.lambda, 0.75);
  EXPECT_EQ(p.diagnostics.rho, 2u);

  const auto u = project_sorted(std::vector{0.7, 2.0});
  EXPECT_EQ(u.point.values[0], 0.0);
  EXPECT_DOUBLE_EQ(u.point.values[1], 1.0);
  EXPECT_DOUBLE_EQ(u.diagnostics.lambda, 1.0);
  EXPECT_EQ(u.diagnostics.rho, 1u);
}

TEST(ProjectSorted, PointOnSimplexIsFixed) {
  const std::vector v{0.2, 0.3, 0.5};
  const auto p = project_sorted(v);
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(p.point.values[i], v[i], 1e-15);
  EXPECT_NEAR(p.diagnostics.lambda, 0.0, 1e-15);
}

TEST(ProjectSorted, MatchesExhaustiveOracle) {
  Rng rng(11);
  for (int rep = 0; rep < 2000; ++rep) {
    const auto v = random_vector(rng, 1 + rep % 6);
    const double z = rng.uniform(0.1, 3.0);
    const auto w = project_sorted(v, z).point.values;
    const auto ref = oracle::exhaustive_projection(v, z);
    for (std::size_t i = 0; i < v.size(); ++i) ASSERT_NEAR(w[i], ref[i], 1e-12);
  }
}

TEST(ProjectSorted, LargerTargetThanMassGivesNegativeLambda) {
  const std::vector v{0.1, 0.2};
  const auto p = project_sorted(v, 1.0);
  EXPECT_LT(p.diagnostics.lambda, 0.0);
  EXPECT_NEAR(p.point.values[0], 0.45, 1e-15);
  EXPECT_NEAR(p.point.values[1], 0.55, 1e-15);
  Rng rng(1);
  const auto m = project_median(v, 1.0, rng);
  EXPECT_NEAR(m.point.values[0], 0.45, 1e-15);
}

TEST(ProjectSorted, RejectsInvalidInput) {
  EXPECT_THROW(project_sorted(std::vector<double>{}), InvalidInput);
  EXPECT_THROW(project_sorted(std::vector{0.0, 0.0}), InvalidInput);
  EXPECT_THROW(project_sorted(std::vector{1.0, -0.5}), InvalidInput);
  EXPECT_THROW(project_sorted(std::vector<double>{1.0, NAN}), InvalidInput);
  EXPECT_THROW(project_sorted(std::vector<double>{1.0, INFINITY}), InvalidInput);
  EXPECT_THROW(project_sorted(std::vector{1.0}, 0.0), InvalidInput);
  EXPECT_THROW(project_sorted(std::vector{1.0}, -1.0), InvalidInput);
  try {
    project_sorted(std::vector{0.0, 0.0, 0.0});
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate input"), std::string::npos);
  }
  Rng rng(1);
  EXPECT_THROW(project_median(std::vector{0.0}, 1.0, rng), InvalidInput);
}

TEST(ProjectMedian, AgreesWithSortedAndIsPermutationEquivariant) {
  Rng rng(5);
  Rng pivots(6);
  for (int rep = 0; rep < 3000; ++rep) {
    const std::size_t d = 1 + rng.index(60);
    auto v = random_vector(rng, d);
    // Ties and zeros exercise the partition bookkeeping.
    if (d > 3) {
      v[1] = v[0];
      v[2] = 0.0;
    }
    const double z = rng.uniform(0.2, 5.0);
    const auto s = project_sorted(v, z);
    const auto m = project_median(v, z, pivots);
    ASSERT_EQ(s.diagnostics.rho, m.diagnostics.rho);
    for (std::size_t i = 0; i < d; ++i) ASSERT_NEAR(s.point.values[i], m.point.values[i], 1e-12);

    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.engine());
    std::vector<double> pv(d);
    for (std::size_t i = 0; i < d; ++i) pv[i] = v[perm[i]];
    const auto pm = project_median(pv, z, pivots);
    for (std::size_t i = 0; i < d; ++i) ASSERT_NEAR(pm.point.values[i], m.point.values[perm[i]], 1e-12);
  }
}

TEST(ProjectMedian, TwoDimPoint) {
  Rng rng(0);
  const auto p = project_median(std::vector{1.5, 1.0}, 1.0, rng);
  EXPECT_DOUBLE_EQ(p.point.values[0], 0.75);
  EXPECT_DOUBLE_EQ(p.point.values[1], 0.25);
}

TEST(Projection, StructuralProperties) {
  Rng rng(21);
  for (int rep = 0; rep < 2000; ++rep) {
    const std::size_t d = 2 + rng.index(30);
    auto v = random_vector(rng, d);
    v[rng.index(d)] = 0.0;
    const double z = rng.uniform(0.1, 4.0);
    const auto p = project_sorted(v, z);
    const auto& w = p.point.values;
    EXPECT_NEAR(sum(w), z, 1e-9 * z);
    double kkt = 0.0;
    for (double x : v) kkt += std::max(x - p.diagnostics.lambda, 0.0);
    EXPECT_NEAR(kkt, z, 1e-9 * z);
    std::size_t positive = 0;
    for (std::size_t i = 0; i < d; ++i) {
      ASSERT_GE(w[i], 0.0);
      // Zero preservation needs lambda >= 0, i.e. sum(v) >= z.
      if (v[i] == 0.0 && p.diagnostics.lambda >= 0.0) {
        ASSERT_EQ(w[i], 0.0);
      }
      if (w[i] > 0.0) ++positive;
      for (std::size_t j = 0; j < d; ++j) {
        if (v[i] >= v[j]) {
          ASSERT_GE(w[i], w[j]);
        }
      }
    }
    EXPECT_EQ(positive, p.diagnostics.rho);
    EXPECT_EQ(oracle::positive_count(v, z), p.diagnostics.rho);

    const double z_small = z * rng.uniform(0.05, 1.0);
    const auto twice = project_sorted(w, z_small).point.values;
    const auto once = project_sorted(v, z_small).point.values;
    for (std::size_t i = 0; i < d; ++i) ASSERT_NEAR(twice[i], once[i], 1e-9);

    std::vector<double> scaled(v);
    for (auto& x : scaled) x /= z;
    const auto unit = project_sorted(scaled, 1.0).point.values;
    for (std::size_t i = 0; i < d; ++i) ASSERT_NEAR(w[i], z * unit[i], 1e-12 * std::max(1.0, z));
  }
}

TEST(Support, ExactZeros) {
  EXPECT_EQ(support(SimplexPoint{{0.75, 0.25}, 1.0}), (Direction{0, 1}));
  EXPECT_EQ(support(SimplexPoint{{0.0, 1.0}, 1.0}), (Direction{1}));
  EXPECT_EQ(support(SimplexPoint{{1.0 / 3, 1.0 / 3, 1.0 / 3}, 1.0}), (Direction{0, 1, 2}));
}

TEST(RescaledProject, MatchesSupportCharacterization) {
  const auto p = rescaled_project(std::vector{3.0, 2.0}, 2.0);
  EXPECT_DOUBLE_EQ(p.point.values[0], 0.75);
  EXPECT_DOUBLE_EQ(p.point.values[1], 0.25);

  const std::vector onto{0.1, 0.6, 0.3};
  const auto same = rescaled_project(onto, 1.0).point.values;
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(same[i], onto[i], 1e-15);

  Rng rng(8);
  for (int rep = 0; rep < 3000; ++rep) {
    const std::size_t d = 1 + rng.index(5);
    std::vector<double> a = random_vector(rng, d, 1.0);
    const double total = sum(a);
    const double c = rng.uniform(1.0, 6.0);
    const double t = rng.uniform(0.5, 3.0);
    std::vector<double> x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = a[i] / total * c * t;
    const Direction beta = support(rescaled_project(x, t).point);
    std::vector<double> v(x);
    for (auto& e : v) e /= t;
    ASSERT_EQ(beta, oracle::lemma3_support(v));
    ASSERT_TRUE(oracle::lemma3_null_outside(v, beta) || beta.size() == d);
  }
}

}  // namespace
}  // namespace srv

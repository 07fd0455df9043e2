#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "srv/datagen.hpp"
#include "srv/errors.hpp"
#include "srv/simplex_projection.hpp"

namespace srv {
namespace {

std::vector<double> column(const SampleMatrix& m, std::size_t j) {
  std::vector<double> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, j);
  return out;
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(RandomCorrelation, UnitDiagonalSymmetricPsd) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const Eigen::MatrixXd s = random_correlation(12, rng);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(s(i, i), 1.0, 1e-12);
    EXPECT_EQ((s - s.transpose()).norm(), 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-10);
  }
  Rng rng(42);
  const Eigen::MatrixXd two = random_correlation(2, rng);
  EXPECT_LT(std::abs(two(0, 1)), 1.0);
}

TEST(GaussianSample, IdentityColumnsUncorrelated) {
  Rng rng(1);
  const std::size_t n = 20000;
  const SampleMatrix m = gaussian_sample(Eigen::MatrixXd::Identity(3, 3), n, rng);
  EXPECT_LE(std::abs(correlation(column(m, 0), column(m, 1))), 4.0 / std::sqrt(double(n)));
  EXPECT_LE(std::abs(correlation(column(m, 1), column(m, 2))), 4.0 / std::sqrt(double(n)));
}

TEST(GaussianSample, ReproducesCovariance) {
  Eigen::MatrixXd s(2, 2);
  s << 1.0, 0.6, 0.6, 1.0;
  Rng rng(2);
  const std::size_t n = 50000;
  const SampleMatrix m = gaussian_sample(s, n, rng);
  EXPECT_NEAR(correlation(column(m, 0), column(m, 1)), 0.6, 4.0 / std::sqrt(double(n)));
}

TEST(RankTransform, Examples) {
  SampleMatrix m(3, 2);
  const double col0[] = {3, 1, 2};
  for (std::size_t i = 0; i < 3; ++i) {
    m(i, 0) = col0[i];
    m(i, 1) = 5.0;
  }
  const SampleMatrix r = rank_transform(m);
  EXPECT_DOUBLE_EQ(r(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(r(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(r(2, 0), 1.5);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(r(i, 1), 1.0);
}

TEST(RankTransform, RangeAndMonotoneInvariance) {
  Rng rng(3);
  const std::size_t n = 500;
  SampleMatrix m(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, 0) = rng.normal();
    m(i, 1) = rng.pareto(1.0);
  }
  const SampleMatrix r = rank_transform(m);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto c = column(r, j);
    EXPECT_DOUBLE_EQ(*std::min_element(c.begin(), c.end()), 1.0);
    EXPECT_DOUBLE_EQ(*std::max_element(c.begin(), c.end()), double(n));
  }
  SampleMatrix g = m;
  for (auto& x : g.values()) x = std::exp(3.0 * x) + 1.0;
  EXPECT_EQ(rank_transform(g), r);
  EXPECT_THROW(rank_transform(SampleMatrix(1, 2)), InvalidInput);
}

TEST(CumulativePareto, BlockShapeAndErrors) {
  Rng rng(4);
  const double one[] = {1.0};
  const auto single = cumulative_pareto_block(one, rng);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_GE(single[0], 1.0);
  const double bad[] = {2.0, 1.0};
  EXPECT_THROW(cumulative_pareto_block(bad, rng), InvalidInput);
  const double equal[] = {1.0, 1.0};
  EXPECT_THROW(cumulative_pareto_block(equal, rng), InvalidInput);
  EXPECT_THROW(cumulative_pareto_block(std::span<const double>{}, rng), InvalidInput);
}

TEST(CumulativePareto, FirstMarginIsExactPareto) {
  Rng rng(5);
  const double alphas[] = {1.0, 2.0};
  const std::size_t n = 1'000'000;
  std::size_t above10 = 0, above100 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto b = cumulative_pareto_block(alphas, rng);
    ASSERT_GE(b[1], b[0]);
    above10 += b[0] > 10.0;
    above100 += b[0] > 100.0;
  }
  for (auto [count, p] : {std::pair{above10, 0.1}, std::pair{above100, 0.01}}) {
    const double se = std::sqrt(p * (1 - p) / n);
    EXPECT_LE(std::abs(double(count) / n - p), 3.0 * se);
  }
}

TEST(CumulativePareto, LargeBlocksConcentrateOnDiagonal) {
  Rng rng(6);
  const double alphas[] = {1.0, 2.0, 2.0};
  double max_dev = 0.0;
  int large = 0;
  for (int i = 0; i < 200000; ++i) {
    const auto b = cumulative_pareto_block(alphas, rng);
    const double s = b[0] + b[1] + b[2];
    if (s < 3000.0) continue;
    ++large;
    for (double x : b) max_dev = std::max(max_dev, std::abs(x / s - 1.0 / 3));
  }
  EXPECT_GT(large, 10);
  EXPECT_LT(max_dev, 0.02);
}

TEST(Designs, DimensionsAndTruth) {
  Rng rng(7);
  const Dataset dep = dependent_model(1000, rng);
  EXPECT_EQ(dep.sample.cols(), 50u);
  EXPECT_EQ(dep.truth.directions.size(), 20u);
  EXPECT_EQ(dep.truth.directions.front(), (Direction{0, 1}));
  EXPECT_EQ(dep.truth.directions.back(), (Direction{47, 48, 49}));

  const Dataset non = nonmaximal_model(1000, rng);
  EXPECT_EQ(non.sample.cols(), 60u);
  ASSERT_EQ(non.truth.classes.size(), 3u);
  for (const auto& [name, dirs] : non.truth.classes) EXPECT_EQ(dirs.size(), 20u);
  EXPECT_EQ(non.truth.classes[0].second[19], (Direction{57, 58, 59}));
  EXPECT_EQ(non.truth.classes[2].second[1], (Direction{3}));

  Rng sr(8);
  const Eigen::MatrixXd sigma = random_correlation(40, sr);
  const Dataset ai = asymptotic_independence_model(2000, sigma, rng);
  EXPECT_EQ(ai.sample.cols(), 40u);
  EXPECT_EQ(ai.truth.directions.size(), 40u);
  EXPECT_GE(*std::min_element(ai.sample.values().begin(), ai.sample.values().end()), 1.0);
}

TEST(Designs, DependentBlocksAreIndependent) {
  Rng rng(9);
  const std::size_t n = 100000;
  const Dataset dep = dependent_model(n, rng);
  auto indicator = [&](std::size_t j) {
    auto c = column(dep.sample, j);
    std::vector<double> sorted(c);
    std::nth_element(sorted.begin(), sorted.begin() + n * 9 / 10, sorted.end());
    const double q = sorted[n * 9 / 10];
    for (auto& x : c) x = x > q ? 1.0 : 0.0;
    return c;
  };
  EXPECT_LE(std::abs(correlation(indicator(0), indicator(2))), 4.0 / std::sqrt(double(n)));
  EXPECT_LE(std::abs(correlation(indicator(1), indicator(20))), 4.0 / std::sqrt(double(n)));
  EXPECT_GT(correlation(indicator(0), indicator(1)), 0.1);
}

TEST(Designs, NonmaximalBlockChainProbabilities) {
  Rng rng(10);
  const std::size_t n = 200000;
  const Dataset non = nonmaximal_model(n, rng);
  // Rows dominated by the first block with a large radius follow the Z chain.
  std::size_t c1 = 0, c12 = 0, c123 = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = non.sample.row(i);
    const double s = row[0] + row[1] + row[2];
    if (s < 1000.0) continue;
    const auto w = rescaled_project(row.subspan(0, 3), 500.0).point;
    const Direction beta = support(w);
    ++total;
    c1 += beta == Direction{0};
    c12 += beta == Direction{0, 1};
    c123 += beta == Direction{0, 1, 2};
  }
  ASSERT_GT(total, 100u);
  // Given |P| > 2t the radius Y is roughly Pareto on (2, inf), so
  // P(C_1) = P(Y > 17) = 2/17 and P(C_12) = P(17/5 < Y < 17) = 8/17.
  const double p1 = 2.0 / 17, p12 = 8.0 / 17;
  EXPECT_NEAR(double(c1) / total, p1, 4.0 * std::sqrt(p1 * (1 - p1) / total));
  EXPECT_NEAR(double(c12) / total, p12, 4.0 * std::sqrt(p12 * (1 - p12) / total) + 0.02);
  EXPECT_EQ(c1 + c12 + c123, total);
}

TEST(PowerTransform, IdentityHillAndErrors) {
  Rng rng(11);
  const std::size_t n = 100000;
  SampleMatrix m(n, 1);
  for (std::size_t i = 0; i < n; ++i) m(i, 0) = rng.pareto(1.0);
  EXPECT_EQ(power_transform(m, 1.0), m);
  const SampleMatrix sq = power_transform(m, 2.0);
  const auto k = static_cast<std::size_t>(std::sqrt(double(n)));
  EXPECT_NEAR(oracle::hill_tail_index(column(sq, 0), k), 0.5, 0.1);
  EXPECT_NEAR(oracle::hill_tail_index(column(m, 0), k), 1.0, 0.2);
  SampleMatrix neg(1, 1, -1.0);
  EXPECT_THROW(power_transform(neg, 2.0), InvalidInput);
  EXPECT_THROW(power_transform(m, 0.0), InvalidInput);
}

TEST(Designs, Deterministic) {
  Rng a(99), b(99);
  EXPECT_EQ(dependent_model(500, a).sample, dependent_model(500, b).sample);
  Rng c(5), d(5);
  const Eigen::MatrixXd s1 = random_correlation(5, c);
  const Eigen::MatrixXd s2 = random_correlation(5, d);
  EXPECT_EQ(s1, s2);
  EXPECT_EQ(gaussian_sample(s1, 300, c), gaussian_sample(s2, 300, d));
}

}  // namespace
}  // namespace srv

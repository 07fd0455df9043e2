#include "srv/datagen.hpp"

#include <algorithm>
#include <cmath>

#include "srv/errors.hpp"

namespace srv {

Eigen::MatrixXd random_correlation(std::size_t d, Rng& rng) {
  if (d < 2) throw InvalidInput("random_correlation needs d >= 2");
  const auto dim = static_cast<Eigen::Index>(d);
  for (;;) {
    Eigen::MatrixXd raw(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) raw(i, j) = rng.uniform(-1.0, 1.0);
    }
    Eigen::MatrixXd gram = raw.transpose() * raw;
    Eigen::VectorXd diag = gram.diagonal();
    if ((diag.array() <= 0.0).any()) continue;  // probability zero
    Eigen::VectorXd scale = diag.array().rsqrt();
    Eigen::MatrixXd sigma = scale.asDiagonal() * gram * scale.asDiagonal();
    sigma = 0.5 * (sigma + sigma.transpose());
    sigma.diagonal().setOnes();
    return sigma;
  }
}

SampleMatrix gaussian_sample(const Eigen::MatrixXd& sigma, std::size_t n, Rng& rng) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw InvalidInput("covariance must be a nonempty square matrix");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    Eigen::MatrixXd jittered = sigma;
    jittered.diagonal().array() += 1e-10;
    llt.compute(jittered);
    if (llt.info() != Eigen::Success) {
      throw InvalidInput("covariance factorization failed after diagonal jitter");
    }
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  const auto d = static_cast<std::size_t>(sigma.rows());
  // Column i of `noise` is the i-th observation; draws are consumed row by row.
  Eigen::MatrixXd noise(sigma.rows(), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < noise.cols(); ++i) {
    for (Eigen::Index j = 0; j < noise.rows(); ++j) noise(j, i) = rng.normal();
  }
  const Eigen::MatrixXd correlated = lower.triangularView<Eigen::Lower>() * noise;
  SampleMatrix out(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const double* column = correlated.data() + static_cast<std::ptrdiff_t>(i * d);
    std::copy(column, column + d, out.row(i).begin());
  }
  return out;
}

SampleMatrix rank_transform(const SampleMatrix& m) {
  const std::size_t n = m.rows();
  if (n < 2) throw InvalidInput("rank_transform needs at least two rows");
  SampleMatrix out(n, m.cols());
  std::vector<double> sorted(n);
  const double rows = static_cast<double>(n);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) sorted[i] = m(i, j);
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      const auto below = std::lower_bound(sorted.begin(), sorted.end(), m(i, j)) - sorted.begin();
      out(i, j) = rows / (rows - static_cast<double>(below));
    }
  }
  return out;
}

void cumulative_pareto_block(std::span<const double> alphas, Rng& rng, std::span<double> out) {
  if (alphas.empty()) throw InvalidInput("cumulative Pareto block needs k >= 1");
  if (out.size() != alphas.size()) throw InvalidInput("output size must equal block size");
  for (std::size_t j = 1; j < alphas.size(); ++j) {
    if (!(alphas[0] < alphas[j])) {
      throw InvalidInput("cumulative Pareto block requires alphas[0] < alphas[j] for j >= 1");
    }
  }
  const double base = rng.pareto(alphas[0]);
  out[0] = base;
  for (std::size_t j = 1; j < alphas.size(); ++j) out[j] = base + rng.pareto(alphas[j]);
}

std::vector<double> cumulative_pareto_block(std::span<const double> alphas, Rng& rng) {
  std::vector<double> out(alphas.size());
  cumulative_pareto_block(alphas, rng, out);
  return out;
}

Dataset asymptotic_independence_model(std::size_t n, const Eigen::MatrixXd& sigma, Rng& rng) {
  Dataset out;
  out.sample = rank_transform(gaussian_sample(sigma, n, rng));
  out.truth.label = "asymptotic-independence";
  for (std::size_t j = 0; j < out.sample.cols(); ++j) {
    out.truth.directions.push_back(Direction{static_cast<Direction::index_type>(j)});
  }
  return out;
}

Dataset dependent_model(std::size_t n, Rng& rng) {
  constexpr std::size_t kPairs = 10;
  constexpr std::size_t kTriples = 10;
  constexpr std::size_t kDim = 2 * kPairs + 3 * kTriples;
  const double pair_alphas[] = {1.0, 2.0};
  const double triple_alphas[] = {1.0, 2.0, 2.0};

  Dataset out;
  out.sample = SampleMatrix(n, kDim);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.sample.row(i);
    for (std::size_t b = 0; b < kPairs; ++b) {
      cumulative_pareto_block(pair_alphas, rng, row.subspan(2 * b, 2));
    }
    for (std::size_t b = 0; b < kTriples; ++b) {
      cumulative_pareto_block(triple_alphas, rng, row.subspan(2 * kPairs + 3 * b, 3));
    }
  }
  out.truth.label = "dependent";
  for (std::size_t b = 0; b < kPairs; ++b) {
    const auto j = static_cast<Direction::index_type>(2 * b);
    out.truth.directions.push_back(Direction{j, j + 1});
  }
  for (std::size_t b = 0; b < kTriples; ++b) {
    const auto j = static_cast<Direction::index_type>(2 * kPairs + 3 * b);
    out.truth.directions.push_back(Direction{j, j + 1, j + 2});
  }
  return out;
}

Dataset nonmaximal_model(std::size_t n, Rng& rng) {
  constexpr std::size_t kBlocks = 20;
  constexpr double a1 = 7.0 / 17.0;
  constexpr double a2 = 6.0 / 17.0;
  constexpr double a3 = 4.0 / 17.0;

  Dataset out;
  out.sample = SampleMatrix(n, 3 * kBlocks);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.sample.row(i);
    for (std::size_t b = 0; b < kBlocks; ++b) {
      const double p = rng.pareto(1.0);
      const double p2 = rng.pareto(2.0);
      const double p3 = rng.pareto(2.0);
      row[3 * b] = a1 * p;
      row[3 * b + 1] = a2 * p + p2;
      row[3 * b + 2] = a3 * p + p3;
    }
  }
  out.truth.label = "nonmaximal";
  std::vector<Direction> triples, pairs, singles;
  for (std::size_t b = 0; b < kBlocks; ++b) {
    const auto j = static_cast<Direction::index_type>(3 * b);
    triples.push_back(Direction{j, j + 1, j + 2});
    pairs.push_back(Direction{j, j + 1});
    singles.push_back(Direction{j});
  }
  out.truth.directions = triples;
  out.truth.directions.insert(out.truth.directions.end(), pairs.begin(), pairs.end());
  out.truth.directions.insert(out.truth.directions.end(), singles.begin(), singles.end());
  out.truth.classes = {{"three-dimensional", std::move(triples)},
                       {"two-dimensional", std::move(pairs)},
                       {"one-dimensional", std::move(singles)}};
  return out;
}

SampleMatrix power_transform(const SampleMatrix& m, double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw InvalidInput("power must be finite and > 0");
  SampleMatrix out = m;
  for (double& x : out.values()) {
    if (x < 0.0) throw InvalidInput("power transform needs nonnegative entries");
    if (q != 1.0) x = std::pow(x, q);
  }
  return out;
}

}  // namespace srv

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "srv/direction.hpp"
#include "srv/rng.hpp"

namespace srv {

// Row-major n x d sample, one observation per row.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  SampleMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<double>& values() { return data_; }
  const std::vector<double>& values() const { return data_; }

  friend bool operator==(const SampleMatrix&, const SampleMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Directions a design should reveal, optionally broken into named classes
// (used by the non-maximal design, where each class is scored separately).
struct GroundTruth {
  std::string label;
  std::vector<Direction> directions;
  std::vector<std::pair<std::string, std::vector<Direction>>> classes;
};

struct Dataset {
  SampleMatrix sample;
  GroundTruth truth;
};

// Sigma = D S'^T S' D with S' iid U(-1, 1) and D the inverse square root of
// the diagonal of S'^T S'. Unit diagonal, symmetric PSD.
Eigen::MatrixXd random_correlation(std::size_t d, Rng& rng);

// n iid N(0, Sigma) rows through a Cholesky factor (diagonal jitter 1e-10
// when the plain factorization fails). Throws InvalidInput if both fail.
SampleMatrix gaussian_sample(const Eigen::MatrixXd& sigma, std::size_t n, Rng& rng);

// X_ij = 1 / (1 - F_j(X_ij)) with F_j(x) = #{i : X_ij < x} / n. Outputs lie in
// [1, n]; tied inputs share an output.
SampleMatrix rank_transform(const SampleMatrix& m);

// (P_1, P_1 + P_2, ..., P_1 + P_k) with independent P_j ~ Pareto(alphas[j]).
// Requires alphas[0] < alphas[j] for j >= 1.
std::vector<double> cumulative_pareto_block(std::span<const double> alphas, Rng& rng);
void cumulative_pareto_block(std::span<const double> alphas, Rng& rng, std::span<double> out);

// Gaussian copula on d coordinates, rank-transformed to unit Pareto margins.
// Truth: the d axes.
Dataset asymptotic_independence_model(std::size_t n, const Eigen::MatrixXd& sigma, Rng& rng);

// d = 50: ten P(2) blocks (alphas 1, 2) then ten P(3) blocks (alphas 1, 2, 2).
// Truth: {1,2}, {3,4}, ..., {19,20} and {21,22,23}, ..., {48,49,50}.
Dataset dependent_model(std::size_t n, Rng& rng);

// d = 60: twenty blocks (a1 P, a2 P + P2, a3 P + P3) with a = (7,6,4)/17,
// P ~ Pareto(1) and P2, P3 ~ Pareto(2). Truth classes: the twenty triples
// (maximal), pairs {j, j+1} and singletons {j}, j = 1, 4, ..., 58.
Dataset nonmaximal_model(std::size_t n, Rng& rng);

// Componentwise q-th power. Entries must be >= 0.
SampleMatrix power_transform(const SampleMatrix& m, double q);

}  // namespace srv

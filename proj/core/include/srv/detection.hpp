#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "srv/datagen.hpp"
#include "srv/direction.hpp"

namespace srv {

struct DetectionConfig {
  std::optional<std::size_t> k;  // exceedance count; defaults to ceil(sqrt(n))
  double p = 0.3;                // threshold weight: T_beta must exceed p / |C|
  double epsilon = 0.5;          // DAMEX rectangle thickness, in (0, 1)
  bool rank_transform = false;   // projection path only: standardize margins first
};

struct DetectionReport {
  std::string method;  // "euclidean" or "damex"
  DirectionMap<double> directions;     // survivors of the p / |C| cut
  DirectionMap<double> pre_threshold;  // every direction with T_beta > 0
  double t = 0.0;                      // threshold on the norm
  std::size_t n_exceed = 0;
  std::size_t k = 0;
  double p = 0.0;
  double epsilon = 0.0;
  double cutoff = 0.0;  // p / |C|
  bool rank_transformed = false;

  // Survivors sorted by T_beta descending, then lexicographically.
  std::vector<std::pair<Direction, double>> sorted() const;
  std::vector<Direction> detected() const;
};

std::size_t default_k(std::size_t n);

// Sparse-regular-variation detection: t is the (k+1)-th largest l1 row norm,
// every row with |x|_1 > t is assigned support(pi(x / t)), T_beta is the
// fraction of exceedances assigned to beta, and directions with
// T_beta <= p / |{beta : T_beta > 0}| are dropped.
//
// When k == n, or when fewer than k + 1 rows have a positive norm, t is the
// smallest positive row norm and exceedance is |x|_1 >= t.
//
// Throws InvalidInput for k == 0, k > n, negative or non-finite entries, or
// an all-zero sample.
DetectionReport detect(const SampleMatrix& m, const DetectionConfig& cfg);

// DAMEX baseline: V = rank_transform(m), t = n / k, rows with max_j V_ij > t
// are assigned {j : V_ij > epsilon t}, T_beta = count / k, then the same
// p / |C| cut.
DetectionReport damex(const SampleMatrix& m, const DetectionConfig& cfg);
// As damex() for a sample that is already rank-transformed.
DetectionReport damex_ranked(const SampleMatrix& ranked, const DetectionConfig& cfg);

struct ErrorCounts {
  std::size_t type1 = 0;  // detected but not in the truth
  std::size_t type2 = 0;  // in the truth but not detected
};

ErrorCounts compare_errors(const DetectionReport& report, const GroundTruth& truth);
ErrorCounts compare_errors(const std::vector<Direction>& detected, const GroundTruth& truth);

// Per truth class, how many of its directions were detected; `other` counts
// detected directions outside every class.
struct ClassRecovery {
  std::vector<std::size_t> recovered;
  std::size_t other = 0;
};

ClassRecovery class_recovery(const DetectionReport& report, const GroundTruth& truth);

}  // namespace srv

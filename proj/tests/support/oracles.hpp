#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "srv/direction.hpp"

// Brute-force references that share no code with the library.
namespace srv::oracle {

// Minimizer of |w - v|^2 over {w >= 0, sum w = z}, found by trying every
// support beta with the closed form w_beta = v_beta - (|v_beta| - z) / |beta|
// and keeping the best feasible candidate. Exponential in d.
std::vector<double> exhaustive_projection(std::span<const double> v, double z = 1.0);

// The unique beta with
//   max_{i in beta} sum_{j in beta} (v_j - v_i) < 1 and
//   min_{i not in beta} sum_{j in beta} (v_j - v_i) >= 1,
// found by enumeration. Returns an empty Direction if none or several match.
Direction lemma3_support(std::span<const double> v);

// min_{i not in beta} sum_{j in beta} (v_j - v_i)_+ >= 1.
bool lemma3_null_outside(std::span<const double> v, const Direction& beta);

// #{j : v_j - (sum_k v_k 1{v_k >= v_j} - z) / #{k : v_k >= v_j} > 0}.
std::size_t positive_count(std::span<const double> v, double z = 1.0);

// Hill estimate of the tail index from the k largest observations.
double hill_tail_index(std::vector<double> sample, std::size_t k);

// Kolmogorov-Smirnov distance between the sample and U(0, 1).
double ks_uniform(std::vector<double> sample);
// Asymptotic 1% critical value of the one-sample statistic.
double ks_critical_1pct(std::size_t n);

}  // namespace srv::oracle

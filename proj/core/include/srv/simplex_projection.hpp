#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "srv/direction.hpp"
#include "srv/rng.hpp"

namespace srv {

// A point of the positive sphere {w >= 0 : sum(w) = scale}. Coordinates
// outside the support are exactly zero.
struct SimplexPoint {
  std::vector<double> values;
  double scale = 1.0;
};

struct ProjectionDiagnostics {
  double lambda = 0.0;  // w_i = max(v_i - lambda, 0)
  std::size_t rho = 0;  // number of strictly positive output coordinates
};

struct Projection {
  SimplexPoint point;
  ProjectionDiagnostics diagnostics;
};

// Euclidean projection of v onto {w >= 0 : sum(w) = z} by sorting the
// coordinates in decreasing order and locating the last index j with
// mu_j - (mu_1 + ... + mu_j - z) / j > 0. O(d log d).
//
// Throws InvalidInput when v is empty, has a negative or non-finite entry,
// is identically zero, or when z <= 0. z larger than sum(v) is allowed and
// yields lambda < 0.
Projection project_sorted(std::span<const double> v, double z = 1.0);

// Same projection via randomized pivot partitioning (expected O(d)). The
// pivot is drawn uniformly from the active set using `rng`.
Projection project_median(std::span<const double> v, double z, Rng& rng);

// pi(x / t) on the unit simplex.
Projection rescaled_project(std::span<const double> x, double t);

// {i : w_i > 0}. Exact comparison: projection clamps to exact zeros.
Direction support(const SimplexPoint& w);

}  // namespace srv

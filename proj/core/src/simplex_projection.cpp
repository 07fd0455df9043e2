#include "srv/simplex_projection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "srv/errors.hpp"

namespace srv {
namespace {

void validate(std::span<const double> v, double z) {
  if (v.empty()) throw InvalidInput("projection of an empty vector");
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw InvalidInput("projection scale z must be finite and > 0, got " + std::to_string(z));
  }
  bool any_positive = false;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      throw InvalidInput("non-finite entry at coordinate " + std::to_string(i + 1));
    }
    if (v[i] < 0.0) {
      throw InvalidInput("negative entry at coordinate " + std::to_string(i + 1));
    }
    any_positive = any_positive || v[i] > 0.0;
  }
  if (!any_positive) {
    throw InvalidInput("degenerate input: projection undefined by this implementation's convention "
                       "(all-zero vector)");
  }
}

Projection threshold(std::span<const double> v, double z, double lambda) {
  Projection out;
  out.point.scale = z;
  out.point.values.resize(v.size());
  out.diagnostics.lambda = lambda;
  std::size_t rho = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double w = v[i] - lambda;
    if (w > 0.0) {
      out.point.values[i] = w;
      ++rho;
    } else {
      out.point.values[i] = 0.0;
    }
  }
  out.diagnostics.rho = rho;
  return out;
}

}  // namespace

Projection project_sorted(std::span<const double> v, double z) {
  validate(v, z);
  std::vector<double> mu(v.begin(), v.end());
  std::stable_sort(mu.begin(), mu.end(), std::greater<>());

  double partial = 0.0;
  double kept_sum = 0.0;
  std::size_t rho = 0;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    partial += mu[j];
    if (mu[j] - (partial - z) / static_cast<double>(j + 1) > 0.0) {
      rho = j + 1;
      kept_sum = partial;
    }
  }
  // rho >= 1 always: mu_1 - (mu_1 - z) = z > 0.
  return threshold(v, z, (kept_sum - z) / static_cast<double>(rho));
}

Projection project_median(std::span<const double> v, double z, Rng& rng) {
  validate(v, z);
  std::vector<double> work(v.begin(), v.end());

  // Active set U is work[lo, hi). Accepted coordinates are accumulated in
  // (s, rho) and never revisited.
  std::size_t lo = 0;
  std::size_t hi = work.size();
  double s = 0.0;
  std::size_t rho = 0;
  while (lo < hi) {
    const std::size_t pick = lo + rng.index(hi - lo);
    std::swap(work[lo], work[pick]);
    const double pivot = work[lo];
    auto mid = std::partition(work.begin() + static_cast<std::ptrdiff_t>(lo) + 1,
                              work.begin() + static_cast<std::ptrdiff_t>(hi),
                              [pivot](double x) { return x >= pivot; });
    const auto split = static_cast<std::size_t>(mid - work.begin());
    // G = work[lo, split) includes the pivot, L = work[split, hi).
    const double delta_s = std::accumulate(work.begin() + static_cast<std::ptrdiff_t>(lo),
                                           work.begin() + static_cast<std::ptrdiff_t>(split), 0.0);
    const std::size_t delta_rho = split - lo;
    if ((s + delta_s) - static_cast<double>(rho + delta_rho) * pivot < z) {
      s += delta_s;
      rho += delta_rho;
      lo = split;
    } else {
      hi = split;
      lo = lo + 1;
    }
  }
  return threshold(v, z, (s - z) / static_cast<double>(rho));
}

Projection rescaled_project(std::span<const double> x, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw InvalidInput("rescaling threshold t must be finite and > 0");
  }
  std::vector<double> scaled(x.size());
  std::transform(x.begin(), x.end(), scaled.begin(), [t](double xi) { return xi / t; });
  return project_sorted(scaled, 1.0);
}

Direction support(const SimplexPoint& w) { return Direction::positive_part(w.values); }

}  // namespace srv

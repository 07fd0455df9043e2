#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace srv {

std::uint64_t splitmix64(std::uint64_t x);

// Derives an independent sub-seed from a master seed and a path of integer
// labels (stream offset, table id, replication index, ...). Two different
// paths give statistically unrelated streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path);

// Seeded random stream. Uniforms are built from raw 64-bit engine output so
// that Pareto and uniform draws are bit-reproducible across standard
// libraries; normal draws go through std::normal_distribution.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  engine_type& engine() { return engine_; }

  // Uniform on the open interval (0, 1).
  double uniform_open();
  // Uniform on (lo, hi).
  double uniform(double lo, double hi);
  // Standard Pareto: P(X > x) = x^{-alpha} for x >= 1, by inverse transform.
  double pareto(double alpha);
  double normal();
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::uint64_t seed_;
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace srv

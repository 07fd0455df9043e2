#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srv/direction.hpp"
#include "srv/rng.hpp"
#include "srv/simplex_projection.hpp"

namespace srv {

// Law of the spectral vector Theta on the unit simplex, tagged with the tail
// index alpha of the Pareto radius.
struct SpectralModel {
  enum class Kind {
    Degenerate,  // Theta = atom almost surely
    Uniform2D,   // d = 2, Theta_1 ~ U(0, 1)
    Discrete,    // Theta = e(beta) / |beta| with probability weight(beta)
    Custom,
  };

  std::string label;
  double alpha = 1.0;
  std::size_t dim = 0;
  Kind kind = Kind::Custom;
  // Writes one draw of Theta into `out` (size dim).
  std::function<void(Rng&, std::span<double>)> sampler;
  // P(Theta in C_beta) when the law of Theta is discrete.
  std::optional<DirectionMap<double>> closed_form;
  std::vector<double> atom;  // Degenerate only
};

SpectralModel degenerate_model(std::vector<double> atom, double alpha, std::string label = "degenerate");
// Theta = (1/d, ..., 1/d).
SpectralModel equal_weights_model(std::size_t d, double alpha);
// d = 2 with Theta_1 uniform on (0, 1).
SpectralModel uniform_model(double alpha);
// Theta = a = (7, 6, 4) / 17, the three-coordinate proportional model.
SpectralModel proportional_model(double alpha);
// Mixture of the points e(beta)/|beta|. Weights must be nonnegative, sum to
// one within 1e-12 and reference coordinates < d.
SpectralModel discrete_model(std::size_t d, DirectionMap<double> weights, double alpha,
                             std::string label = "discrete");
// Asymptotic independence: mass 1/d on each axis.
SpectralModel axes_model(std::size_t d, double alpha);

// Looks a model up by CLI name: uniform, proportional, equal, axes.
SpectralModel model_by_name(const std::string& name, double alpha, std::size_t d);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

// Fixed stream offsets so that estimators fed the same master seed use
// independent random streams.
namespace stream {
inline constexpr std::uint64_t kThetaExpectation = 1;
inline constexpr std::uint64_t kZDirect = 2;
inline constexpr std::uint64_t kConditional = 3;
inline constexpr std::uint64_t kProjected = 4;
}  // namespace stream

struct ZDraw {
  double radius = 0.0;  // Y
  std::vector<double> theta;
  SimplexPoint z;
};

// Z = pi(Y Theta) with Y = U^{-1/alpha} independent of Theta.
SimplexPoint sample_Z(const SpectralModel& model, Rng& rng);
ZDraw sample_Z_draw(const SpectralModel& model, Rng& rng);

// Integrands of the Theta-side expectation formulas, exposed for reuse by
// tests and closed forms. Theta_{beta,j,+} = sum_{k in beta} (Theta_k - Theta_j)_+.
double c_beta_integrand(std::span<const double> theta, const Direction& beta, double alpha);
double null_complement_integrand(std::span<const double> theta, const Direction& beta, double alpha);
// `x` is a full-length vector with x_{beta^c} = 0 and x_j != 1/|beta| on beta.
double g_beta_integrand(std::span<const double> theta, const Direction& beta,
                        std::span<const double> x, double alpha);

// P(Z in C_beta) = E[(min_{j in beta^c} Theta_{beta,j,+}^alpha - max_{j in beta} Theta_{beta,j,+}^alpha)_+],
// averaged over n draws of Theta.
McEstimate prob_C_beta_mc(const SpectralModel& model, const Direction& beta, std::size_t n,
                          std::uint64_t seed);
// P(Z_{beta^c} = 0) = E[min_{j in beta^c} Theta_{beta,j,+}^alpha]. beta must not be full.
McEstimate prob_null_on_complement(const SpectralModel& model, const Direction& beta,
                                   std::size_t n, std::uint64_t seed);
// G_beta(x) = P(Z_beta > x_beta, Z_{beta^c} = 0) through the Theta-side formula.
McEstimate g_beta_mc(const SpectralModel& model, const Direction& beta, std::span<const double> x,
                     std::size_t n, std::uint64_t seed);
// P(Z_j = 1).
McEstimate prob_axis(const SpectralModel& model, std::size_t j, std::size_t n, std::uint64_t seed);

// Direct frequency of {Z_beta > x_beta, Z_{beta^c} = 0} over draws of Z.
McEstimate g_beta_direct(const SpectralModel& model, const Direction& beta,
                         std::span<const double> x, std::size_t n, std::uint64_t seed);

// Empirical law of support(Z) over n draws. Only observed directions are stored.
struct AngularEstimate {
  DirectionMap<double> direction_probs;
  std::size_t n_draws = 0;
  std::uint64_t seed = 0;

  double probability(const Direction& beta) const;
  // Binomial standard error sqrt(p (1 - p) / n).
  double std_error(const Direction& beta) const;
};

AngularEstimate estimate_Z_law(const SpectralModel& model, std::size_t n, std::uint64_t seed);

// Exact values where the model admits one: discrete laws (Z = Theta),
// degenerate laws (deterministic integrand), and the uniform d = 2 law.
std::optional<double> closed_form_prob_C_beta(const SpectralModel& model, const Direction& beta);
std::optional<double> closed_form_null_on_complement(const SpectralModel& model,
                                                     const Direction& beta);

// Compares the direction law of (Z | Y > r) with that of pi(r Z), each from
// its own stream.
struct IdentityCheck {
  double r = 1.0;
  DirectionMap<double> conditional;  // (Z | Y > r)
  DirectionMap<double> projected;    // pi(r Z)
  std::size_t n_conditional = 0;
  std::size_t n_projected = 0;
  double tv_distance = 0.0;
  // Half the sum over classes of the two-sample standard error of each
  // difference of frequencies.
  double tv_std_error = 0.0;
};

IdentityCheck conditional_identity_check(const SpectralModel& model, double r, std::size_t n,
                                         std::uint64_t seed);

// Every beta with probs(beta) > tol and no strict superset beta' with
// probs(beta') > tol. Sorted.
std::vector<Direction> maximal_directions(const DirectionMap<double>& probs, double tol = 0.0);
// Estimator version: beta counts as charged when its frequency exceeds
// n_se standard errors.
std::vector<Direction> maximal_directions(const AngularEstimate& estimate, double n_se = 3.0);

}  // namespace srv

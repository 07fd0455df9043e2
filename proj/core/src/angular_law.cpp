#include "srv/angular_law.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srv/errors.hpp"

namespace srv {
namespace {

class Accumulator {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }
  McEstimate result() const {
    McEstimate out;
    out.n = n_;
    out.estimate = mean_;
    if (n_ > 1) {
      out.std_error = std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_));
    }
    return out;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

void check_beta(const SpectralModel& model, const Direction& beta) {
  if (beta.empty()) throw InvalidInput("direction must be nonempty");
  if (beta.indices().back() >= model.dim) {
    throw InvalidInput("direction " + beta.to_string() + " exceeds model dimension " +
                       std::to_string(model.dim));
  }
}

void check_n(std::size_t n) {
  if (n == 0) throw InvalidInput("number of Monte-Carlo draws must be >= 1");
}

// sum_{k in beta} (theta_k - theta_j)_+
double excess_over(std::span<const double> theta, const Direction& beta, std::size_t j) {
  double total = 0.0;
  for (auto k : beta.indices()) total += std::max(theta[k] - theta[j], 0.0);
  return total;
}

double pow_alpha(double x, double alpha) { return alpha == 1.0 ? x : std::pow(x, alpha); }

template <class Integrand>
McEstimate theta_average(const SpectralModel& model, std::size_t n, std::uint64_t seed,
                         Integrand&& integrand) {
  check_n(n);
  Rng rng(derive_seed(seed, {stream::kThetaExpectation}));
  std::vector<double> theta(model.dim);
  Accumulator acc;
  for (std::size_t i = 0; i < n; ++i) {
    model.sampler(rng, theta);
    acc.add(integrand(std::span<const double>(theta)));
  }
  return acc.result();
}

void validate_g_beta_point(const SpectralModel& model, const Direction& beta,
                           std::span<const double> x) {
  check_beta(model, beta);
  if (x.size() != model.dim) {
    throw InvalidInput("G_beta point must have one entry per coordinate");
  }
  const double inv = 1.0 / static_cast<double>(beta.size());
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!(x[j] >= 0.0) || !std::isfinite(x[j])) {
      throw InvalidInput("G_beta point must be finite and nonnegative");
    }
    total += x[j];
    const bool in_beta = beta.contains(static_cast<Direction::index_type>(j));
    if (!in_beta && x[j] != 0.0) {
      throw InvalidInput("G_beta point must vanish outside beta");
    }
    if (in_beta && x[j] == inv) {
      throw InvalidInput("G_beta point has a coordinate equal to 1/|beta|, which is excluded");
    }
  }
  if (total > 1.0) throw InvalidInput("G_beta point must lie in the unit l1 ball");
}

SpectralModel make_discrete(std::size_t d, DirectionMap<double> weights, double alpha,
                            std::string label) {
  // Cumulative table in a fixed (sorted) order for reproducible sampling.
  std::vector<std::pair<Direction, double>> table(weights.begin(), weights.end());
  std::sort(table.begin(), table.end());
  std::vector<Direction> points;
  std::vector<double> cumulative;
  double running = 0.0;
  for (auto& [beta, w] : table) {
    if (w <= 0.0) continue;
    running += w;
    points.push_back(beta);
    cumulative.push_back(running);
  }
  SpectralModel m;
  m.label = std::move(label);
  m.alpha = alpha;
  m.dim = d;
  m.kind = SpectralModel::Kind::Discrete;
  m.closed_form = std::move(weights);
  m.sampler = [points, cumulative](Rng& rng, std::span<double> out) {
    const double u = rng.uniform_open() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    const Direction& beta = points[static_cast<std::size_t>(it - cumulative.begin())];
    std::fill(out.begin(), out.end(), 0.0);
    const double mass = 1.0 / static_cast<double>(beta.size());
    for (auto j : beta.indices()) out[j] = mass;
  };
  return m;
}

}  // namespace

SpectralModel degenerate_model(std::vector<double> atom, double alpha, std::string label) {
  if (atom.empty()) throw InvalidInput("degenerate model needs a nonempty atom");
  const double total = std::accumulate(atom.begin(), atom.end(), 0.0);
  for (double a : atom) {
    if (!(a >= 0.0)) throw InvalidInput("degenerate model atom must be nonnegative");
  }
  if (!(total > 0.0)) throw InvalidInput("degenerate model atom must have positive mass");
  for (double& a : atom) a /= total;

  SpectralModel m;
  m.label = std::move(label);
  m.alpha = alpha;
  m.dim = atom.size();
  m.kind = SpectralModel::Kind::Degenerate;
  m.atom = atom;
  DirectionMap<double> law;
  law[Direction::positive_part(atom)] = 1.0;
  m.closed_form = std::move(law);
  m.sampler = [atom](Rng&, std::span<double> out) { std::copy(atom.begin(), atom.end(), out.begin()); };
  return m;
}

SpectralModel equal_weights_model(std::size_t d, double alpha) {
  if (d == 0) throw InvalidInput("dimension must be >= 1");
  return degenerate_model(std::vector<double>(d, 1.0), alpha, "equal");
}

SpectralModel uniform_model(double alpha) {
  SpectralModel m;
  m.label = "uniform";
  m.alpha = alpha;
  m.dim = 2;
  m.kind = SpectralModel::Kind::Uniform2D;
  m.sampler = [](Rng& rng, std::span<double> out) {
    out[0] = rng.uniform_open();
    out[1] = 1.0 - out[0];
  };
  return m;
}

SpectralModel proportional_model(double alpha) {
  return degenerate_model({7.0, 6.0, 4.0}, alpha, "proportional");
}

SpectralModel discrete_model(std::size_t d, DirectionMap<double> weights, double alpha,
                             std::string label) {
  if (d == 0) throw InvalidInput("dimension must be >= 1");
  double total = 0.0;
  for (const auto& [beta, w] : weights) {
    if (beta.empty() || beta.indices().back() >= d) {
      throw InvalidInput("discrete model direction " + beta.to_string() + " out of range");
    }
    if (!(w >= 0.0)) throw InvalidInput("discrete model weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidInput("discrete model weights must sum to 1");
  }
  return make_discrete(d, std::move(weights), alpha, std::move(label));
}

SpectralModel axes_model(std::size_t d, double alpha) {
  if (d == 0) throw InvalidInput("dimension must be >= 1");
  DirectionMap<double> w;
  for (std::size_t j = 0; j < d; ++j) {
    w[Direction{static_cast<Direction::index_type>(j)}] = 1.0 / static_cast<double>(d);
  }
  return make_discrete(d, std::move(w), alpha, "axes");
}

SpectralModel model_by_name(const std::string& name, double alpha, std::size_t d) {
  if (!(alpha > 0.0)) throw InvalidInput("tail index alpha must be > 0");
  if (name == "uniform") return uniform_model(alpha);
  if (name == "proportional") return proportional_model(alpha);
  if (name == "equal") return equal_weights_model(d, alpha);
  if (name == "axes") return axes_model(d, alpha);
  throw InvalidInput("unknown spectral model '" + name +
                     "' (expected uniform, proportional, equal or axes)");
}

ZDraw sample_Z_draw(const SpectralModel& model, Rng& rng) {
  ZDraw draw;
  draw.theta.resize(model.dim);
  model.sampler(rng, draw.theta);
  draw.radius = rng.pareto(model.alpha);
  std::vector<double> scaled(model.dim);
  for (std::size_t j = 0; j < model.dim; ++j) scaled[j] = draw.radius * draw.theta[j];
  draw.z = project_sorted(scaled, 1.0).point;
  return draw;
}

SimplexPoint sample_Z(const SpectralModel& model, Rng& rng) { return sample_Z_draw(model, rng).z; }

double c_beta_integrand(std::span<const double> theta, const Direction& beta, double alpha) {
  double upper = 1.0;
  for (auto j : beta.complement(theta.size())) {
    upper = std::min(upper, pow_alpha(excess_over(theta, beta, j), alpha));
  }
  double lower = 0.0;
  for (auto j : beta.indices()) {
    lower = std::max(lower, pow_alpha(excess_over(theta, beta, j), alpha));
  }
  return std::max(upper - lower, 0.0);
}

double null_complement_integrand(std::span<const double> theta, const Direction& beta,
                                 double alpha) {
  double upper = 1.0;
  for (auto j : beta.complement(theta.size())) {
    upper = std::min(upper, pow_alpha(excess_over(theta, beta, j), alpha));
  }
  return upper;
}

double g_beta_integrand(std::span<const double> theta, const Direction& beta,
                        std::span<const double> x, double alpha) {
  const double size = static_cast<double>(beta.size());
  double mass = 0.0;
  for (auto k : beta.indices()) mass += theta[k];

  double upper = 1.0;
  double lower = 0.0;
  for (auto j : beta.indices()) {
    const double ratio = std::max((size * theta[j] - mass) / (size * x[j] - 1.0), 0.0);
    const double term = pow_alpha(ratio, alpha);
    if (size * x[j] > 1.0) {
      upper = std::min(upper, term);
    } else {
      lower = std::max(lower, term);
    }
  }
  for (auto j : beta.complement(theta.size())) {
    upper = std::min(upper, pow_alpha(std::max(mass - size * theta[j], 0.0), alpha));
  }
  return std::max(upper - lower, 0.0);
}

McEstimate prob_C_beta_mc(const SpectralModel& model, const Direction& beta, std::size_t n,
                          std::uint64_t seed) {
  check_beta(model, beta);
  return theta_average(model, n, seed, [&](std::span<const double> theta) {
    return c_beta_integrand(theta, beta, model.alpha);
  });
}

McEstimate prob_null_on_complement(const SpectralModel& model, const Direction& beta,
                                   std::size_t n, std::uint64_t seed) {
  check_beta(model, beta);
  if (beta.size() == model.dim) {
    throw InvalidInput("complement of the full direction is empty");
  }
  return theta_average(model, n, seed, [&](std::span<const double> theta) {
    return null_complement_integrand(theta, beta, model.alpha);
  });
}

McEstimate g_beta_mc(const SpectralModel& model, const Direction& beta, std::span<const double> x,
                     std::size_t n, std::uint64_t seed) {
  validate_g_beta_point(model, beta, x);
  return theta_average(model, n, seed, [&](std::span<const double> theta) {
    return g_beta_integrand(theta, beta, x, model.alpha);
  });
}

McEstimate prob_axis(const SpectralModel& model, std::size_t j, std::size_t n,
                     std::uint64_t seed) {
  if (j >= model.dim) throw InvalidInput("axis index out of range");
  return prob_C_beta_mc(model, Direction{static_cast<Direction::index_type>(j)}, n, seed);
}

McEstimate g_beta_direct(const SpectralModel& model, const Direction& beta,
                         std::span<const double> x, std::size_t n, std::uint64_t seed) {
  check_beta(model, beta);
  check_n(n);
  if (x.size() != model.dim) throw InvalidInput("G_beta point must have one entry per coordinate");
  Rng rng(derive_seed(seed, {stream::kZDirect}));
  Accumulator acc;
  for (std::size_t i = 0; i < n; ++i) {
    const SimplexPoint z = sample_Z(model, rng);
    bool hit = true;
    for (std::size_t j = 0; j < model.dim && hit; ++j) {
      hit = beta.contains(static_cast<Direction::index_type>(j)) ? z.values[j] > x[j]
                                                                  : z.values[j] == 0.0;
    }
    acc.add(hit ? 1.0 : 0.0);
  }
  return acc.result();
}

double AngularEstimate::probability(const Direction& beta) const {
  auto it = direction_probs.find(beta);
  return it == direction_probs.end() ? 0.0 : it->second;
}

double AngularEstimate::std_error(const Direction& beta) const {
  if (n_draws == 0) return 0.0;
  const double p = probability(beta);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n_draws));
}

AngularEstimate estimate_Z_law(const SpectralModel& model, std::size_t n, std::uint64_t seed) {
  check_n(n);
  Rng rng(derive_seed(seed, {stream::kZDirect}));
  DirectionMap<std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) ++counts[support(sample_Z(model, rng))];
  AngularEstimate out;
  out.n_draws = n;
  out.seed = seed;
  for (const auto& [beta, c] : counts) {
    out.direction_probs[beta] = static_cast<double>(c) / static_cast<double>(n);
  }
  return out;
}

std::optional<double> closed_form_prob_C_beta(const SpectralModel& model, const Direction& beta) {
  check_beta(model, beta);
  switch (model.kind) {
    case SpectralModel::Kind::Degenerate:
      return c_beta_integrand(model.atom, beta, model.alpha);
    case SpectralModel::Kind::Discrete: {
      auto it = model.closed_form->find(beta);
      return it == model.closed_form->end() ? 0.0 : it->second;
    }
    case SpectralModel::Kind::Uniform2D:
      // P(Z_1 = 1) = E[(2U - 1)_+^alpha] = 1 / (2 (alpha + 1)).
      if (beta.size() == 1) return 0.5 / (model.alpha + 1.0);
      return model.alpha / (model.alpha + 1.0);
    case SpectralModel::Kind::Custom:
      break;
  }
  return std::nullopt;
}

std::optional<double> closed_form_null_on_complement(const SpectralModel& model,
                                                     const Direction& beta) {
  check_beta(model, beta);
  if (beta.size() == model.dim) return 1.0;
  switch (model.kind) {
    case SpectralModel::Kind::Degenerate:
      return null_complement_integrand(model.atom, beta, model.alpha);
    case SpectralModel::Kind::Discrete: {
      double total = 0.0;
      for (const auto& [gamma, w] : *model.closed_form) {
        if (gamma.is_subset_of(beta)) total += w;
      }
      return total;
    }
    case SpectralModel::Kind::Uniform2D:
      return 0.5 / (model.alpha + 1.0);
    case SpectralModel::Kind::Custom:
      break;
  }
  return std::nullopt;
}

IdentityCheck conditional_identity_check(const SpectralModel& model, double r, std::size_t n,
                                         std::uint64_t seed) {
  if (!(r >= 1.0)) throw InvalidInput("conditioning level r must be >= 1");
  check_n(n);
  IdentityCheck out;
  out.r = r;

  DirectionMap<std::size_t> cond_counts;
  Rng cond_rng(derive_seed(seed, {stream::kConditional}));
  for (std::size_t i = 0; i < n; ++i) {
    ZDraw draw = sample_Z_draw(model, cond_rng);
    if (draw.radius > r) {
      ++cond_counts[support(draw.z)];
      ++out.n_conditional;
    }
  }

  DirectionMap<std::size_t> proj_counts;
  Rng proj_rng(derive_seed(seed, {stream::kProjected}));
  std::vector<double> scaled(model.dim);
  for (std::size_t i = 0; i < n; ++i) {
    const SimplexPoint z = sample_Z(model, proj_rng);
    for (std::size_t j = 0; j < model.dim; ++j) scaled[j] = r * z.values[j];
    ++proj_counts[support(project_sorted(scaled, 1.0).point)];
    ++out.n_projected;
  }

  auto to_probs = [](const DirectionMap<std::size_t>& counts, std::size_t total) {
    DirectionMap<double> probs;
    for (const auto& [beta, c] : counts) {
      probs[beta] = static_cast<double>(c) / static_cast<double>(total);
    }
    return probs;
  };
  if (out.n_conditional == 0) {
    throw InvalidInput("no draw exceeded the conditioning level; increase n");
  }
  out.conditional = to_probs(cond_counts, out.n_conditional);
  out.projected = to_probs(proj_counts, out.n_projected);

  DirectionMap<int> classes;
  for (const auto& [beta, p] : out.conditional) classes[beta] = 1;
  for (const auto& [beta, p] : out.projected) classes[beta] = 1;
  const double n_a = static_cast<double>(out.n_conditional);
  const double n_b = static_cast<double>(out.n_projected);
  for (const auto& [beta, unused] : classes) {
    const auto a_it = out.conditional.find(beta);
    const auto b_it = out.projected.find(beta);
    const double pa = a_it == out.conditional.end() ? 0.0 : a_it->second;
    const double pb = b_it == out.projected.end() ? 0.0 : b_it->second;
    out.tv_distance += 0.5 * std::abs(pa - pb);
    out.tv_std_error += 0.5 * std::sqrt(pa * (1.0 - pa) / n_a + pb * (1.0 - pb) / n_b);
  }
  return out;
}

namespace {

std::vector<Direction> maximal_among(std::vector<Direction> charged) {
  std::vector<Direction> out;
  for (const auto& beta : charged) {
    const bool dominated = std::any_of(charged.begin(), charged.end(), [&](const Direction& other) {
      return beta.is_strict_subset_of(other);
    });
    if (!dominated) out.push_back(beta);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Direction> maximal_directions(const DirectionMap<double>& probs, double tol) {
  if (tol < 0.0) throw InvalidInput("tolerance must be >= 0");
  std::vector<Direction> charged;
  for (const auto& [beta, p] : probs) {
    if (p > tol) charged.push_back(beta);
  }
  return maximal_among(std::move(charged));
}

std::vector<Direction> maximal_directions(const AngularEstimate& estimate, double n_se) {
  std::vector<Direction> charged;
  for (const auto& [beta, p] : estimate.direction_probs) {
    if (p > n_se * estimate.std_error(beta)) charged.push_back(beta);
  }
  return maximal_among(std::move(charged));
}

}  // namespace srv

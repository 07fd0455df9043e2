#include "srv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "srv/angular_law.hpp"
#include "srv/errors.hpp"
#include "srv/io.hpp"

namespace srv {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_independence_table(int table) { return table == 1 || table == 2; }

// Tables 1 and 2 report two error types of one experiment; they share seeds.
std::uint64_t table_stream(int table) { return is_independence_table(table) ? 1 : table; }

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ExperimentConfig default_config(int table, Scale scale, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.table = table;
  cfg.scale = scale;
  cfg.seed = seed;
  cfg.sizes = {10'000, 50'000, 100'000};
  cfg.replications = scale == Scale::Full ? 100 : 10;
  switch (table) {
    case 1:
    case 2:
      cfg.n_models = scale == Scale::Full ? 20 : 3;
      cfg.alphas = {1.0, 0.5, 2.0};
      cfg.epsilons = {0.05, 0.1, 0.5};
      break;
    case 3:
      cfg.alphas = {1.0, 0.5, 2.0};
      break;
    case 4:
      cfg.alphas = {1.0};
      break;
    default:
      throw InvalidInput("unknown table id " + std::to_string(table) + " (expected 1-4)");
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.table < 1 || cfg.table > 4) {
    throw InvalidInput("unknown table id " + std::to_string(cfg.table) + " (expected 1-4)");
  }
  if (cfg.sizes.empty()) throw InvalidInput("experiment needs at least one sample size");
  for (auto n : cfg.sizes) {
    if (n < 2) throw InvalidInput("sample sizes must be >= 2");
  }
  if (cfg.replications == 0 || cfg.n_models == 0) {
    throw InvalidInput("replication and model counts must be >= 1");
  }
  for (double a : cfg.alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidInput("alpha values must be positive");
  }
  for (double e : cfg.epsilons) {
    if (!(e > 0.0 && e < 1.0)) throw InvalidInput("epsilon values must lie in (0, 1)");
  }
  if (cfg.alphas.empty() && cfg.epsilons.empty()) throw InvalidInput("experiment has no methods");
  if (!is_independence_table(cfg.table) && !cfg.epsilons.empty()) {
    throw InvalidInput("DAMEX columns exist only for tables 1 and 2");
  }
}

std::uint64_t covariance_seed(std::uint64_t master, int table, std::size_t model_index) {
  return derive_seed(master, {table_stream(table), 0, model_index});
}

std::uint64_t data_seed(std::uint64_t master, int table, std::size_t n, std::size_t model_index,
                        std::size_t replication) {
  return derive_seed(master, {table_stream(table), 1, n, model_index, replication});
}

Design design_for_table(int table) {
  switch (table) {
    case 1:
    case 2:
      return Design::AsymptoticIndependence;
    case 3:
      return Design::Dependent;
    case 4:
      return Design::Nonmaximal;
    default:
      throw InvalidInput("unknown table id " + std::to_string(table) + " (expected 1-4)");
  }
}

Design design_by_name(const std::string& name) {
  if (name == "asympt-indep") return Design::AsymptoticIndependence;
  if (name == "dependent") return Design::Dependent;
  if (name == "nonmaximal") return Design::Nonmaximal;
  throw InvalidInput("unknown model '" + name + "' (expected asympt-indep, dependent, nonmaximal)");
}

std::string design_name(Design design) {
  switch (design) {
    case Design::AsymptoticIndependence:
      return "asympt-indep";
    case Design::Dependent:
      return "dependent";
    case Design::Nonmaximal:
      return "nonmaximal";
  }
  return {};
}

Dataset generate_dataset(Design design, std::size_t n, std::uint64_t seed,
                         std::uint64_t sigma_seed, std::size_t d) {
  Rng rng(seed);
  switch (design) {
    case Design::AsymptoticIndependence: {
      if (d < 1) throw InvalidInput("dimension must be >= 1");
      Rng sigma_rng(sigma_seed);
      const Eigen::MatrixXd sigma = random_correlation(d, sigma_rng);
      return asymptotic_independence_model(n, sigma, rng);
    }
    case Design::Dependent:
      return dependent_model(n, rng);
    case Design::Nonmaximal:
      return nonmaximal_model(n, rng);
  }
  throw InvalidInput("unknown design");
}

Dataset generate_replication(const ExperimentConfig& cfg, std::size_t n, std::size_t model_index,
                             std::size_t replication) {
  return generate_dataset(design_for_table(cfg.table), n,
                          data_seed(cfg.seed, cfg.table, n, model_index, replication),
                          covariance_seed(cfg.seed, cfg.table, model_index));
}

double power_for_alpha(double alpha) { return 1.0 / alpha; }

namespace {

std::vector<MethodOutcome> score_dataset(const ExperimentConfig& cfg, const Dataset& data) {
  std::vector<MethodOutcome> out;
  const bool has_classes = !data.truth.classes.empty();
  auto record = [&](std::string method, double param, const DetectionReport& report,
                    Clock::time_point start) {
    MethodOutcome o;
    o.method = std::move(method);
    o.param = param;
    o.errors = compare_errors(report, data.truth);
    if (has_classes) o.recovery = class_recovery(report, data.truth);
    o.detected = report.detected();
    o.seconds = seconds_since(start);
    out.push_back(std::move(o));
  };

  DetectionConfig dc;
  dc.p = cfg.p;
  for (double alpha : cfg.alphas) {
    const auto start = Clock::now();
    const double q = power_for_alpha(alpha);
    const DetectionReport report =
        q == 1.0 ? detect(data.sample, dc) : detect(power_transform(data.sample, q), dc);
    record("euclidean", alpha, report, start);
  }
  for (double eps : cfg.epsilons) {
    const auto start = Clock::now();
    DetectionConfig dd = dc;
    dd.epsilon = eps;
    // The asymptotic-independence sample is already rank-transformed.
    record("damex", eps, damex_ranked(data.sample, dd), start);
  }
  return out;
}

}  // namespace

std::vector<MethodOutcome> run_replication(const ExperimentConfig& cfg, std::size_t n,
                                           std::size_t model_index, std::size_t replication) {
  validate(cfg);
  return score_dataset(cfg, generate_replication(cfg, n, model_index, replication));
}

const CellResult* TableResult::find(std::size_t n, const std::string& method, double param) const {
  for (const auto& c : cells) {
    if (c.n == n && c.method == method && std::abs(c.param - param) < 1e-12) return &c;
  }
  return nullptr;
}

TableResult run_table(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  const std::size_t models = is_independence_table(cfg.table) ? cfg.n_models : 1;
  const std::size_t per_size = models * cfg.replications;
  const std::size_t jobs = cfg.sizes.size() * per_size;

  std::vector<std::vector<MethodOutcome>> outcomes(jobs);
  std::vector<double> gen_seconds(jobs, 0.0);
  std::vector<std::vector<std::pair<std::string, std::vector<Direction>>>> class_layout(jobs);
  parallel_for(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t n = cfg.sizes[job / per_size];
    const std::size_t within = job % per_size;
    const auto gen_start = Clock::now();
    const Dataset data = generate_replication(cfg, n, within / cfg.replications,
                                              within % cfg.replications);
    gen_seconds[job] = seconds_since(gen_start);
    class_layout[job] = data.truth.classes;
    outcomes[job] = score_dataset(cfg, data);
  });

  TableResult result;
  result.config = cfg;
  for (std::size_t s = 0; s < cfg.sizes.size(); ++s) {
    const std::size_t first = s * per_size;
    const std::size_t methods = outcomes[first].size();
    for (std::size_t m = 0; m < methods; ++m) {
      CellResult cell;
      cell.n = cfg.sizes[s];
      cell.method = outcomes[first][m].method;
      cell.param = outcomes[first][m].param;
      cell.replications = per_size;
      for (const auto& [name, dirs] : class_layout[first]) cell.class_names.push_back(name);
      cell.recovered_mean.assign(cell.class_names.size(), 0.0);
      for (std::size_t j = first; j < first + per_size; ++j) {
        const MethodOutcome& o = outcomes[j][m];
        cell.type1_mean += static_cast<double>(o.errors.type1);
        cell.type2_mean += static_cast<double>(o.errors.type2);
        for (std::size_t c = 0; c < o.recovery.recovered.size(); ++c) {
          cell.recovered_mean[c] += static_cast<double>(o.recovery.recovered[c]);
        }
        cell.other_mean += static_cast<double>(o.recovery.other);
        cell.runtime_seconds += o.seconds;
      }
      const double denom = static_cast<double>(per_size);
      cell.type1_mean /= denom;
      cell.type2_mean /= denom;
      for (double& r : cell.recovered_mean) r /= denom;
      cell.other_mean /= denom;
      cell.runtime_seconds /= denom;
      result.cells.push_back(std::move(cell));
    }
  }
  for (double g : gen_seconds) result.generation_seconds += g;
  result.total_seconds = seconds_since(start);
  return result;
}

void write_results_csv(std::ostream& out, const TableResult& result) {
  std::vector<std::string> class_names;
  if (!result.cells.empty()) class_names = result.cells.front().class_names;
  out << "n,alpha_or_eps,method,type1_mean,type2_mean";
  for (const auto& name : class_names) out << ',' << name << "_recovered_mean";
  out << ",other_mean,replications\n";
  for (const auto& c : result.cells) {
    out << c.n << ',' << format_double(c.param) << ',' << c.method << ','
        << format_double(c.type1_mean) << ',' << format_double(c.type2_mean);
    for (double r : c.recovered_mean) out << ',' << format_double(r);
    out << ',';
    if (!class_names.empty()) out << format_double(c.other_mean);
    out << ',' << c.replications << '\n';
  }
}

nlohmann::json summary_json(const TableResult& result) {
  const auto& cfg = result.config;
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : result.cells) {
    nlohmann::json cell = {{"n", c.n},
                           {"method", c.method},
                           {"alpha_or_eps", c.param},
                           {"type1_mean", c.type1_mean},
                           {"type2_mean", c.type2_mean},
                           {"replications", c.replications},
                           {"runtime_seconds", c.runtime_seconds}};
    if (!c.class_names.empty()) {
      nlohmann::json rec = nlohmann::json::object();
      for (std::size_t i = 0; i < c.class_names.size(); ++i) {
        rec[c.class_names[i]] = c.recovered_mean[i];
      }
      cell["recovered_mean"] = rec;
      cell["other_mean"] = c.other_mean;
    }
    cells.push_back(cell);
  }
  return {{"table", cfg.table},
          {"design", design_name(design_for_table(cfg.table))},
          {"scale", cfg.scale == Scale::Full ? "full" : "desk"},
          {"seed", cfg.seed},
          {"sizes", cfg.sizes},
          {"replications", cfg.replications},
          {"n_models", is_independence_table(cfg.table) ? cfg.n_models : 1},
          {"alphas", cfg.alphas},
          {"epsilons", cfg.epsilons},
          {"p", cfg.p},
          {"generation_seconds", result.generation_seconds},
          {"total_seconds", result.total_seconds},
          {"cells", cells}};
}

bool ExampleReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

CheckResult near_target(std::string name, const McEstimate& e, double target, double tol) {
  return {std::move(name), e.estimate, e.std_error, target, tol,
          std::abs(e.estimate - target) <= tol};
}

// Expectation-formula estimate against the direct frequency of support(Z).
CheckResult agreement(std::string name, const McEstimate& formula, double frequency,
                      double frequency_se) {
  const double joint = std::sqrt(formula.std_error * formula.std_error +
                                 frequency_se * frequency_se);
  const double diff = formula.estimate - frequency;
  return {std::move(name), diff, joint, 0.0, 3.0 * joint, std::abs(diff) <= 3.0 * joint};
}

}  // namespace

ExampleReport run_example_checks(std::uint64_t seed, std::size_t n_mc) {
  if (n_mc < 100'000) throw InvalidInput("example checks need n_mc >= 100000");
  ExampleReport report;
  const SpectralModel uniform = uniform_model(1.0);
  const SpectralModel prop = proportional_model(1.0);
  const Direction e1{0}, e2{1}, e12{0, 1}, e123{0, 1, 2};

  report.checks.push_back(near_target("uniform P(Z1=1)",
                                      prob_axis(uniform, 0, n_mc, derive_seed(seed, {1})), 0.25,
                                      0.005));
  report.checks.push_back(near_target("uniform P(Z1=0)",
                                      prob_axis(uniform, 1, n_mc, derive_seed(seed, {2})), 0.25,
                                      0.005));
  const double x0[2] = {0.0, 0.0};
  report.checks.push_back(near_target("uniform G_Z(0)",
                                      g_beta_mc(uniform, e12, x0, n_mc, derive_seed(seed, {3})),
                                      0.5, 0.005));
  const std::vector<std::pair<Direction, double>> chain = {
      {e1, 1.0 / 17}, {e12, 4.0 / 17}, {e123, 12.0 / 17}};
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& [beta, target] = chain[i];
    report.checks.push_back(near_target("proportional P(C" + beta.to_string() + ")",
                                        prob_C_beta_mc(prop, beta, n_mc, derive_seed(seed, {4, i})),
                                        target, 0.005));
  }

  const std::vector<std::pair<const SpectralModel*, std::vector<Direction>>> agreement_sets = {
      {&uniform, {e1, e2, e12}}, {&prop, {e1, e12, e123}}};
  for (std::size_t m = 0; m < agreement_sets.size(); ++m) {
    const auto& [model, dirs] = agreement_sets[m];
    const AngularEstimate law = estimate_Z_law(*model, n_mc, derive_seed(seed, {5, m}));
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      const McEstimate formula = prob_C_beta_mc(*model, dirs[i], n_mc, derive_seed(seed, {6, m, i}));
      report.checks.push_back(agreement(model->label + " formula vs frequency C" + dirs[i].to_string(),
                                        formula, law.probability(dirs[i]), law.std_error(dirs[i])));
    }
  }

  for (std::size_t m = 0; m < agreement_sets.size(); ++m) {
    const SpectralModel& model = *agreement_sets[m].first;
    const IdentityCheck id = conditional_identity_check(model, 2.0, n_mc, derive_seed(seed, {7, m}));
    report.checks.push_back({model.label + " TV((Z | Y>2), pi(2Z))", id.tv_distance,
                             id.tv_std_error, 0.0, 3.0 * id.tv_std_error,
                             id.tv_distance <= 3.0 * id.tv_std_error});
  }
  return report;
}

nlohmann::json to_json(const ExampleReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"estimate", c.estimate},
                      {"std_error", c.std_error},
                      {"target", c.target},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  }
  return {{"all_passed", report.all_passed()}, {"checks", checks}};
}

}  // namespace srv

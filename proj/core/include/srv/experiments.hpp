#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "srv/datagen.hpp"
#include "srv/detection.hpp"

namespace srv {

enum class Scale { Desk, Full };

struct ExperimentConfig {
  int table = 1;                     // 1 and 2 share one experiment
  std::vector<std::size_t> sizes;    // sample sizes n
  std::size_t replications = 10;     // N per covariance draw (or per cell)
  std::size_t n_models = 1;          // covariance draws, tables 1-2 only
  std::vector<double> alphas;        // tail index of the transformed data
  std::vector<double> epsilons;      // DAMEX thickness, tables 1-2 only
  double p = 0.3;
  std::uint64_t seed = 0;
  Scale scale = Scale::Desk;
  unsigned threads = 0;              // 0: hardware concurrency
};

// Desk: N_model = 3, N = 10. Full: N_model = 20, N = 100.
// n in {1e4, 5e4, 1e5}. Tables 1-2 also run DAMEX at eps in {0.05, 0.1, 0.5}.
ExperimentConfig default_config(int table, Scale scale, std::uint64_t seed);
void validate(const ExperimentConfig& cfg);

std::uint64_t covariance_seed(std::uint64_t master, int table, std::size_t model_index);
std::uint64_t data_seed(std::uint64_t master, int table, std::size_t n, std::size_t model_index,
                        std::size_t replication);

enum class Design { AsymptoticIndependence, Dependent, Nonmaximal };

Design design_for_table(int table);
Design design_by_name(const std::string& name);  // asympt-indep | dependent | nonmaximal
std::string design_name(Design design);

// Deterministic dataset for one replication. The asymptotic-independence
// design draws Sigma from `sigma_seed` (d coordinates) and the sample from
// `seed`; the other designs ignore `d` and `sigma_seed`.
Dataset generate_dataset(Design design, std::size_t n, std::uint64_t seed,
                         std::uint64_t sigma_seed, std::size_t d = 40);
Dataset generate_replication(const ExperimentConfig& cfg, std::size_t n, std::size_t model_index,
                             std::size_t replication);

// Power applied to the data before projection-based detection for a tail-index column alpha.
double power_for_alpha(double alpha);

struct MethodOutcome {
  std::string method;  // "euclidean" or "damex"
  double param = 0.0;  // alpha or epsilon
  ErrorCounts errors;
  ClassRecovery recovery;  // filled when the truth has classes
  std::vector<Direction> detected;
  double seconds = 0.0;
};

std::vector<MethodOutcome> run_replication(const ExperimentConfig& cfg, std::size_t n,
                                           std::size_t model_index, std::size_t replication);

struct CellResult {
  std::size_t n = 0;
  std::string method;
  double param = 0.0;
  double type1_mean = 0.0;
  double type2_mean = 0.0;
  std::vector<std::string> class_names;
  std::vector<double> recovered_mean;  // per class
  double other_mean = 0.0;
  std::size_t replications = 0;
  double runtime_seconds = 0.0;  // mean per replication, detection only
};

struct TableResult {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  double generation_seconds = 0.0;
  double total_seconds = 0.0;

  const CellResult* find(std::size_t n, const std::string& method, double param) const;
};

TableResult run_table(const ExperimentConfig& cfg);

// Columns: n, alpha_or_eps, method, type1_mean, type2_mean, then per-class
// recovery means and the "other" mean (blank for tables without classes),
// and the replication count. Contains no timing, so equal configs give
// equal bytes.
void write_results_csv(std::ostream& out, const TableResult& result);
nlohmann::json summary_json(const TableResult& result);

struct CheckResult {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExampleReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Uniform-law atoms, proportional-model chain, G_Z(0), two-estimator
// agreement and the conditional identity. Requires n_mc >= 1e5.
ExampleReport run_example_checks(std::uint64_t seed, std::size_t n_mc);
nlohmann::json to_json(const ExampleReport& report);

}  // namespace srv

#include "srv_cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "srv/angular_law.hpp"
#include "srv/datagen.hpp"
#include "srv/detection.hpp"
#include "srv/errors.hpp"
#include "srv/experiments.hpp"
#include "srv/io.hpp"
#include "srv/simplex_projection.hpp"

namespace srv::cli {
namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

void emit_json(const nlohmann::json& j, const std::string& path, Streams io) {
  if (path.empty() || path == "-") {
    io.out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw InvalidInput("cannot write '" + path + "'");
  f << j.dump(2) << '\n';
}

struct ProjectArgs {
  std::string vector;
  double z = 1.0;
  std::string algorithm = "sorted";
  std::uint64_t seed = 0;
};

void cmd_project(const ProjectArgs& a, Streams io) {
  const std::vector<double> v = parse_vector(a.vector);
  Projection p;
  nlohmann::json j;
  if (a.algorithm == "median") {
    Rng rng(a.seed);
    p = project_median(v, a.z, rng);
    j = to_json(p);
    j["seed"] = a.seed;
  } else {
    p = project_sorted(v, a.z);
    j = to_json(p);
  }
  j["algorithm"] = a.algorithm;
  j["support"] = support(p.point).one_based();
  emit_json(j, "", io);
}

struct DetectArgs {
  std::string input;
  std::string output;
  std::optional<std::size_t> k;
  double p = 0.3;
  double epsilon = 0.5;
  bool rank_transform = false;
};

DetectionConfig detection_config(const DetectArgs& a, std::size_t n, Streams io) {
  DetectionConfig cfg;
  cfg.k = a.k;
  if (cfg.k && *cfg.k > n) {
    io.err << "note: k=" << *cfg.k << " exceeds the " << n << " rows; using k=" << n << '\n';
    cfg.k = n;
  }
  cfg.p = a.p;
  cfg.epsilon = a.epsilon;
  cfg.rank_transform = a.rank_transform;
  return cfg;
}

void cmd_detect(const DetectArgs& a, bool use_damex, Streams io) {
  const SampleMatrix m = read_csv_file(a.input);
  const DetectionConfig cfg = detection_config(a, m.rows(), io);
  const DetectionReport report = use_damex ? damex(m, cfg) : detect(m, cfg);
  nlohmann::json j = to_json(report);
  j["input"] = {{"path", a.input}, {"rows", m.rows()}, {"cols", m.cols()}};
  emit_json(j, a.output, io);
}

struct SimulateArgs {
  std::string model;
  std::size_t n = 10'000;
  std::size_t d = 40;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> sigma_seed;
  double q = 1.0;
  std::string output;
  std::string truth;
  bool header = false;
};

void cmd_simulate(const SimulateArgs& a, Streams io) {
  const Design design = design_by_name(a.model);
  const std::uint64_t sigma_seed = a.sigma_seed.value_or(a.seed);
  Dataset data = generate_dataset(design, a.n, a.seed, sigma_seed, a.d);
  if (a.q != 1.0) data.sample = power_transform(data.sample, a.q);

  nlohmann::json truth = to_json(data.truth);
  truth["model"] = a.model;
  truth["n"] = a.n;
  truth["d"] = data.sample.cols();
  truth["seed"] = a.seed;
  if (design == Design::AsymptoticIndependence) truth["sigma_seed"] = sigma_seed;
  truth["q"] = a.q;

  if (a.output.empty() || a.output == "-") {
    write_csv(io.out, data.sample, a.header);
  } else {
    std::ofstream f(a.output);
    if (!f) throw InvalidInput("cannot write '" + a.output + "'");
    write_csv(f, data.sample, a.header);
  }
  std::string truth_path = a.truth;
  if (truth_path.empty() && !a.output.empty() && a.output != "-") {
    truth_path = a.output + ".truth.json";
  }
  if (!truth_path.empty()) {
    emit_json(truth, truth_path, io);
  } else {
    io.err << truth.dump() << '\n';
  }
  io.err << "simulate: model=" << a.model << " n=" << a.n << " seed=" << a.seed << '\n';
}

struct OracleArgs {
  std::string model = "uniform";
  std::string quantity = "c-beta";
  std::string beta;
  std::string x;
  double alpha = 1.0;
  std::size_t d = 3;
  std::size_t n = 1'000'000;
  std::uint64_t seed = 0;
  double r = 2.0;
};

void cmd_oracle(const OracleArgs& a, Streams io) {
  nlohmann::json j;
  if (a.quantity == "examples") {
    j = to_json(run_example_checks(a.seed, a.n));
    j["seed"] = a.seed;
    j["n"] = a.n;
    emit_json(j, "", io);
    return;
  }
  const SpectralModel model = model_by_name(a.model, a.alpha, a.d);
  j = {{"model", model.label}, {"alpha", model.alpha}, {"dim", model.dim}, {"quantity", a.quantity},
       {"seed", a.seed}};
  auto need_beta = [&] {
    if (a.beta.empty()) throw InvalidInput("--beta is required for " + a.quantity);
    const Direction beta = Direction::parse_one_based(a.beta);
    j["beta"] = beta.one_based();
    return beta;
  };
  if (a.quantity == "c-beta") {
    const Direction beta = need_beta();
    const McEstimate e = prob_C_beta_mc(model, beta, a.n, a.seed);
    j.update(to_json(e));
    if (auto cf = closed_form_prob_C_beta(model, beta)) j["closed_form"] = *cf;
  } else if (a.quantity == "null-complement") {
    const Direction beta = need_beta();
    j.update(to_json(prob_null_on_complement(model, beta, a.n, a.seed)));
    if (auto cf = closed_form_null_on_complement(model, beta)) j["closed_form"] = *cf;
  } else if (a.quantity == "g-beta") {
    const Direction beta = need_beta();
    std::vector<double> x(model.dim, 0.0);
    if (!a.x.empty()) x = parse_vector(a.x);
    j["x"] = x;
    j.update(to_json(g_beta_mc(model, beta, x, a.n, a.seed)));
    j["direct"] = to_json(g_beta_direct(model, beta, x, a.n, a.seed));
  } else if (a.quantity == "z-law") {
    const AngularEstimate law = estimate_Z_law(model, a.n, a.seed);
    std::vector<std::pair<Direction, double>> sorted(law.direction_probs.begin(),
                                                     law.direction_probs.end());
    std::sort(sorted.begin(), sorted.end());
    nlohmann::json dirs = nlohmann::json::array();
    for (const auto& [beta, prob] : sorted) {
      nlohmann::json d = {{"indices", beta.one_based()},
                          {"estimate", prob},
                          {"std_error", law.std_error(beta)}};
      if (auto cf = closed_form_prob_C_beta(model, beta)) d["closed_form"] = *cf;
      dirs.push_back(d);
    }
    j["n"] = a.n;
    j["directions"] = dirs;
    nlohmann::json maximal = nlohmann::json::array();
    for (const auto& beta : maximal_directions(law)) maximal.push_back(beta.one_based());
    j["maximal"] = maximal;
  } else if (a.quantity == "identity") {
    const IdentityCheck id = conditional_identity_check(model, a.r, a.n, a.seed);
    j["r"] = id.r;
    j["tv_distance"] = id.tv_distance;
    j["tv_std_error"] = id.tv_std_error;
    j["n_conditional"] = id.n_conditional;
    j["n_projected"] = id.n_projected;
  }
  emit_json(j, "", io);
}

struct ExperimentArgs {
  int table = 0;
  std::string scale = "desk";
  bool full = false;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::optional<std::size_t> replications;
  std::optional<std::size_t> n_models;
  std::vector<std::size_t> sizes;
};

void cmd_experiment(const ExperimentArgs& a, unsigned threads, Streams io) {
  const Scale scale = (a.full || a.scale == "full") ? Scale::Full : Scale::Desk;
  ExperimentConfig cfg = default_config(a.table, scale, a.seed);
  cfg.threads = threads;
  if (a.replications) cfg.replications = *a.replications;
  if (a.n_models) cfg.n_models = *a.n_models;
  if (!a.sizes.empty()) cfg.sizes = a.sizes;
  const TableResult result = run_table(cfg);

  std::filesystem::create_directories(a.out_dir);
  const auto dir = std::filesystem::path(a.out_dir);
  const auto csv_path = dir / ("table" + std::to_string(a.table) + "_results.csv");
  {
    std::ofstream f(csv_path);
    if (!f) throw InvalidInput("cannot write '" + csv_path.string() + "'");
    write_results_csv(f, result);
  }
  emit_json(summary_json(result), (dir / "summary.json").string(), io);

  io.out << "table " << a.table << " (seed " << a.seed << ", "
         << (scale == Scale::Full ? "full" : "desk") << " scale)\n";
  for (const auto& c : result.cells) {
    io.out << "  n=" << std::setw(6) << c.n << "  " << std::setw(9) << c.method << ' '
           << std::setw(5) << c.param << "  type1=" << std::setw(8) << c.type1_mean
           << "  type2=" << std::setw(6) << c.type2_mean;
    for (std::size_t i = 0; i < c.class_names.size(); ++i) {
      io.out << "  " << c.class_names[i] << '=' << c.recovered_mean[i];
    }
    if (!c.class_names.empty()) io.out << "  other=" << c.other_mean;
    io.out << '\n';
  }
  io.out << "wrote " << csv_path.string() << " and " << (dir / "summary.json").string() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Streams io{out, err};
  CLI::App app{"Sparse regular variation: simplex projection, extremal direction detection, "
               "oracles and experiments",
               "srv"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0: all cores)");

  ProjectArgs pa;
  auto* project = app.add_subcommand("project", "Project a nonnegative vector onto the simplex");
  project->add_option("--vector", pa.vector, "Entries separated by commas or spaces")->required();
  project->add_option("--z", pa.z, "Target sum")->capture_default_str();
  project->add_option("--algorithm", pa.algorithm, "sorted or median")
      ->check(CLI::IsMember({"sorted", "median"}))
      ->capture_default_str();
  project->add_option("--seed", pa.seed, "Pivot seed for the median algorithm")
      ->capture_default_str();

  DetectArgs da;
  auto add_detection_flags = [&](CLI::App* sub, bool with_epsilon) {
    sub->add_option("--input", da.input, "CSV sample, one observation per row")->required();
    sub->add_option("--output", da.output, "JSON report path (stdout when omitted)");
    sub->add_option("--k", da.k, "Number of exceedances (default ceil(sqrt(n)))");
    sub->add_option("--p", da.p, "Threshold weight")->capture_default_str();
    if (with_epsilon) {
      sub->add_option("--epsilon", da.epsilon, "Rectangle thickness in (0, 1)")
          ->capture_default_str();
    }
  };
  auto* detect_cmd = app.add_subcommand("detect", "Projection-based extremal direction detection on a CSV sample");
  add_detection_flags(detect_cmd, false);
  detect_cmd->add_flag("--rank-transform", da.rank_transform,
                       "Standardize margins to unit Pareto first");
  auto* damex_cmd = app.add_subcommand("damex", "DAMEX baseline on a CSV sample");
  add_detection_flags(damex_cmd, true);

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Generate a sample from a simulation design");
  simulate->add_option("--model", sa.model, "asympt-indep, dependent or nonmaximal")
      ->required()
      ->check(CLI::IsMember({"asympt-indep", "dependent", "nonmaximal"}));
  simulate->add_option("--n", sa.n, "Rows")->capture_default_str();
  simulate->add_option("--d", sa.d, "Dimension (asympt-indep only)")->capture_default_str();
  simulate->add_option("--seed", sa.seed, "Sample seed")->capture_default_str();
  simulate->add_option("--sigma-seed", sa.sigma_seed,
                       "Covariance seed for asympt-indep (default: --seed)");
  simulate->add_option("--q", sa.q, "Componentwise power applied to the sample")
      ->capture_default_str();
  simulate->add_option("--output", sa.output, "CSV path (stdout when omitted)");
  simulate->add_option("--truth", sa.truth, "Ground-truth JSON path (default <output>.truth.json)");
  simulate->add_flag("--header", sa.header, "Write a header row");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "Monte Carlo and closed-form angular quantities");
  oracle->add_option("--model", oa.model, "uniform, proportional, equal or axes")
      ->check(CLI::IsMember({"uniform", "proportional", "equal", "axes"}))
      ->capture_default_str();
  oracle->add_option("--quantity", oa.quantity,
                     "c-beta, null-complement, g-beta, z-law, identity or examples")
      ->check(CLI::IsMember({"c-beta", "null-complement", "g-beta", "z-law", "identity", "examples"}))
      ->capture_default_str();
  oracle->add_option("--beta", oa.beta, "Direction, 1-based, e.g. 1,2");
  oracle->add_option("--x", oa.x, "Point for g-beta (default 0)");
  oracle->add_option("--alpha", oa.alpha, "Tail index")->capture_default_str();
  oracle->add_option("--d", oa.d, "Dimension (equal and axes models)")->capture_default_str();
  oracle->add_option("--n", oa.n, "Monte Carlo draws")->capture_default_str();
  oracle->add_option("--seed", oa.seed, "Seed")->capture_default_str();
  oracle->add_option("--r", oa.r, "Radius for the identity check")->capture_default_str();

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "Run a simulation table");
  experiment->add_option("--table", ea.table, "Table id 1-4")->required();
  experiment->add_option("--scale", ea.scale, "desk or full")
      ->check(CLI::IsMember({"desk", "full"}))
      ->capture_default_str();
  experiment->add_flag("--full", ea.full, "Same as --scale full");
  experiment->add_option("--seed", ea.seed, "Master seed")->capture_default_str();
  experiment->add_option("--out-dir", ea.out_dir, "Output directory")->capture_default_str();
  experiment->add_option("--replications", ea.replications, "Override N");
  experiment->add_option("--n-models", ea.n_models, "Override N_model (tables 1-2)");
  experiment->add_option("--sizes", ea.sizes, "Override sample sizes")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*project) cmd_project(pa, io);
    else if (*detect_cmd) cmd_detect(da, false, io);
    else if (*damex_cmd) cmd_detect(da, true, io);
    else if (*simulate) cmd_simulate(sa, io);
    else if (*oracle) cmd_oracle(oa, io);
    else if (*experiment) cmd_experiment(ea, threads, io);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace srv::cli

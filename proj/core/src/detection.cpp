#include "srv/detection.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "srv/datagen.hpp"
#include "srv/errors.hpp"
#include "srv/simplex_projection.hpp"

namespace srv {
namespace {

std::size_t resolve_k(const SampleMatrix& m, const DetectionConfig& cfg) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() == 0) throw InvalidInput("empty sample");
  const std::size_t k = cfg.k.value_or(default_k(n));
  if (k == 0) throw InvalidInput("k must be >= 1");
  if (k > n) {
    throw InvalidInput("k = " + std::to_string(k) + " exceeds the number of rows n = " +
                       std::to_string(n));
  }
  if (!(cfg.p >= 0.0) || !std::isfinite(cfg.p)) throw InvalidInput("p must be finite and >= 0");
  return k;
}

void apply_cut(DetectionReport& report, const DirectionMap<std::size_t>& counts, double normalizer) {
  for (const auto& [beta, c] : counts) {
    report.pre_threshold[beta] = static_cast<double>(c) / normalizer;
  }
  report.cutoff = report.pre_threshold.empty()
                      ? 0.0
                      : report.p / static_cast<double>(report.pre_threshold.size());
  for (const auto& [beta, value] : report.pre_threshold) {
    if (value > report.cutoff) report.directions[beta] = value;
  }
}

}  // namespace

std::size_t default_k(std::size_t n) {
  auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  // guard against sqrt rounding for perfect squares
  while (k > 1 && (k - 1) * (k - 1) >= n) --k;
  while (k * k < n) ++k;
  return std::max<std::size_t>(k, 1);
}

std::vector<std::pair<Direction, double>> DetectionReport::sorted() const {
  std::vector<std::pair<Direction, double>> out(directions.begin(), directions.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::vector<Direction> DetectionReport::detected() const {
  std::vector<Direction> out;
  out.reserve(directions.size());
  for (const auto& [beta, value] : directions) out.push_back(beta);
  std::sort(out.begin(), out.end());
  return out;
}

DetectionReport detect(const SampleMatrix& input, const DetectionConfig& cfg) {
  const std::size_t k = resolve_k(input, cfg);
  const SampleMatrix ranked = cfg.rank_transform ? rank_transform(input) : SampleMatrix{};
  const SampleMatrix& m = cfg.rank_transform ? ranked : input;
  const std::size_t n = m.rows();

  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (double x : m.row(i)) {
      if (!(x >= 0.0) || !std::isfinite(x)) {
        throw InvalidInput("row " + std::to_string(i + 1) +
                           " has a negative or non-finite entry; detection needs nonnegative data");
      }
      total += x;
    }
    norms[i] = total;
  }

  std::vector<double> order = norms;
  double t = 0.0;
  bool inclusive = false;
  if (k < n) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                     std::greater<>());
    t = order[k];
  }
  if (!(t > 0.0)) {
    double smallest = 0.0;
    for (double v : norms) {
      if (v > 0.0 && (smallest == 0.0 || v < smallest)) smallest = v;
    }
    if (smallest == 0.0) throw InvalidInput("all rows are zero");
    t = smallest;
    inclusive = true;
  }

  DetectionReport report;
  report.method = "euclidean";
  report.t = t;
  report.k = k;
  report.p = cfg.p;
  report.epsilon = cfg.epsilon;
  report.rank_transformed = cfg.rank_transform;

  DirectionMap<std::size_t> counts;
  std::vector<double> scaled(m.cols());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(norms[i] > t || (inclusive && norms[i] >= t))) continue;
    const auto row = m.row(i);
    std::transform(row.begin(), row.end(), scaled.begin(), [t](double x) { return x / t; });
    ++counts[support(project_sorted(scaled, 1.0).point)];
    ++report.n_exceed;
  }
  apply_cut(report, counts, static_cast<double>(report.n_exceed));
  return report;
}

DetectionReport damex_ranked(const SampleMatrix& ranked, const DetectionConfig& cfg) {
  const std::size_t k = resolve_k(ranked, cfg);
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw InvalidInput("epsilon must lie in (0, 1)");
  }
  const std::size_t n = ranked.rows();
  const double t = static_cast<double>(n) / static_cast<double>(k);
  const double floor = cfg.epsilon * t;

  DetectionReport report;
  report.method = "damex";
  report.t = t;
  report.k = k;
  report.p = cfg.p;
  report.epsilon = cfg.epsilon;
  report.rank_transformed = true;

  DirectionMap<std::size_t> counts;
  std::vector<Direction::index_type> members;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = ranked.row(i);
    if (!(*std::max_element(row.begin(), row.end()) > t)) continue;
    members.clear();
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] > floor) members.push_back(static_cast<Direction::index_type>(j));
    }
    ++counts[Direction(members)];
    ++report.n_exceed;
  }
  apply_cut(report, counts, static_cast<double>(k));
  return report;
}

DetectionReport damex(const SampleMatrix& m, const DetectionConfig& cfg) {
  resolve_k(m, cfg);
  for (double x : m.values()) {
    if (!std::isfinite(x)) throw InvalidInput("DAMEX input has a non-finite entry");
  }
  return damex_ranked(rank_transform(m), cfg);
}

ErrorCounts compare_errors(const std::vector<Direction>& detected, const GroundTruth& truth) {
  const std::unordered_set<Direction> found(detected.begin(), detected.end());
  const std::unordered_set<Direction> expected(truth.directions.begin(), truth.directions.end());
  ErrorCounts out;
  for (const auto& beta : found) out.type1 += expected.count(beta) == 0 ? 1 : 0;
  for (const auto& beta : expected) out.type2 += found.count(beta) == 0 ? 1 : 0;
  return out;
}

ErrorCounts compare_errors(const DetectionReport& report, const GroundTruth& truth) {
  return compare_errors(report.detected(), truth);
}

ClassRecovery class_recovery(const DetectionReport& report, const GroundTruth& truth) {
  ClassRecovery out;
  std::unordered_set<Direction> in_some_class;
  for (const auto& [name, members] : truth.classes) {
    std::size_t hits = 0;
    for (const auto& beta : members) {
      in_some_class.insert(beta);
      hits += report.directions.count(beta);
    }
    out.recovered.push_back(hits);
  }
  for (const auto& [beta, value] : report.directions) {
    if (in_some_class.count(beta) == 0) ++out.other;
  }
  return out;
}

}  // namespace srv

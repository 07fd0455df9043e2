#include "srv/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "srv/errors.hpp"

namespace srv {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  for (;;) {
    const auto end = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, end == std::string_view::npos ? end : end - pos)));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return cells;
}

bool parse_number(std::string_view cell, double& out) {
  if (cell.empty()) return false;
  if (cell.front() == '+') cell.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size();
}

}  // namespace

SampleMatrix read_csv(std::istream& in, std::vector<std::string>* header) {
  std::vector<double> values;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first_content = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (first_content) {
      first_content = false;
      double probe = 0.0;
      bool numeric = true;
      for (auto cell : cells) numeric = numeric && parse_number(cell, probe);
      if (!numeric) {
        if (header) {
          header->clear();
          for (auto cell : cells) header->emplace_back(cell);
        }
        cols = cells.size();
        continue;
      }
    }
    if (cols == 0) cols = cells.size();
    if (cells.size() != cols) {
      throw InvalidInput("CSV line " + std::to_string(line_no) + ": expected " +
                         std::to_string(cols) + " columns, found " + std::to_string(cells.size()));
    }
    for (std::size_t j = 0; j < cells.size(); ++j) {
      double v = 0.0;
      if (!parse_number(cells[j], v)) {
        throw InvalidInput("CSV line " + std::to_string(line_no) + ", column " +
                           std::to_string(j + 1) + ": non-numeric cell '" + std::string(cells[j]) +
                           "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw InvalidInput("CSV input has no data rows");
  SampleMatrix m(rows, cols);
  m.values() = std::move(values);
  return m;
}

SampleMatrix read_csv_file(const std::string& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  return read_csv(in, header);
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const SampleMatrix& m, bool with_header) {
  if (with_header) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
    out << '\n';
  }
  std::string line;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    line.clear();
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) line += ',';
      line += format_double(row[j]);
    }
    line += '\n';
    out << line;
  }
}

std::vector<double> parse_vector(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto start = text.find_first_not_of(", \t\r\n", pos);
    if (start == std::string_view::npos) break;
    auto end = text.find_first_of(", \t\r\n", start);
    if (end == std::string_view::npos) end = text.size();
    double v = 0.0;
    const auto token = text.substr(start, end - start);
    if (!parse_number(token, v)) {
      throw InvalidInput("vector entry " + std::to_string(out.size() + 1) + " is not a number: '" +
                         std::string(token) + "'");
    }
    out.push_back(v);
    pos = end;
  }
  if (out.empty()) throw InvalidInput("empty vector");
  return out;
}

nlohmann::json to_json(const Projection& projection) {
  return {{"w", projection.point.values},
          {"z", projection.point.scale},
          {"lambda", projection.diagnostics.lambda},
          {"rho", projection.diagnostics.rho}};
}

nlohmann::json to_json(const DetectionReport& report) {
  nlohmann::json config = {{"method", report.method},
                           {"k", report.k},
                           {"p", report.p},
                           {"rank_transform", report.rank_transformed}};
  if (report.method == "damex") config["epsilon"] = report.epsilon;
  nlohmann::json directions = nlohmann::json::array();
  for (const auto& [beta, value] : report.sorted()) {
    directions.push_back({{"indices", beta.one_based()}, {"t_beta", value}});
  }
  return {{"config", config},
          {"t", report.t},
          {"n_exceed", report.n_exceed},
          {"cutoff", report.cutoff},
          {"n_candidates", report.pre_threshold.size()},
          {"directions", directions}};
}

nlohmann::json to_json(const GroundTruth& truth) {
  auto encode = [](const std::vector<Direction>& dirs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& beta : dirs) arr.push_back(beta.one_based());
    return arr;
  };
  nlohmann::json out = {{"label", truth.label}, {"directions", encode(truth.directions)}};
  if (!truth.classes.empty()) {
    nlohmann::json classes = nlohmann::json::array();
    for (const auto& [name, dirs] : truth.classes) {
      classes.push_back({{"name", name}, {"directions", encode(dirs)}});
    }
    out["classes"] = classes;
  }
  return out;
}

nlohmann::json to_json(const McEstimate& estimate) {
  return {{"estimate", estimate.estimate}, {"std_error", estimate.std_error}, {"n", estimate.n}};
}

GroundTruth truth_from_json(const nlohmann::json& j) {
  auto decode = [](const nlohmann::json& arr) {
    std::vector<Direction> dirs;
    for (const auto& item : arr) dirs.push_back(Direction::from_one_based(item.get<std::vector<int>>()));
    return dirs;
  };
  GroundTruth truth;
  try {
    truth.label = j.value("label", "");
    truth.directions = decode(j.at("directions"));
    if (j.contains("classes")) {
      for (const auto& c : j.at("classes")) {
        truth.classes.emplace_back(c.at("name").get<std::string>(), decode(c.at("directions")));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed ground-truth JSON: ") + e.what());
  }
  return truth;
}

}  // namespace srv

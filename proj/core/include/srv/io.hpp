#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "srv/angular_law.hpp"
#include "srv/datagen.hpp"
#include "srv/detection.hpp"
#include "srv/simplex_projection.hpp"

namespace srv {

// Comma-separated numbers, one observation per line. A first row that does
// not parse as numbers is taken as a header. Blank lines are skipped.
// Throws InvalidInput naming the 1-based line and column of the first
// non-numeric cell or ragged row.
SampleMatrix read_csv(std::istream& in, std::vector<std::string>* header = nullptr);
SampleMatrix read_csv_file(const std::string& path, std::vector<std::string>* header = nullptr);

void write_csv(std::ostream& out, const SampleMatrix& m, bool with_header);

// Numbers separated by commas and/or whitespace.
std::vector<double> parse_vector(std::string_view text);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

nlohmann::json to_json(const Projection& projection);
nlohmann::json to_json(const DetectionReport& report);
nlohmann::json to_json(const GroundTruth& truth);
nlohmann::json to_json(const McEstimate& estimate);
GroundTruth truth_from_json(const nlohmann::json& j);

}  // namespace srv

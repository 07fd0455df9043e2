#include "srv/direction.hpp"

#include <algorithm>
#include <charconv>

#include "srv/errors.hpp"

namespace srv {

Direction::Direction(std::vector<index_type> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

Direction::Direction(std::initializer_list<index_type> indices)
    : Direction(std::vector<index_type>(indices)) {}

Direction Direction::parse_one_based(std::string_view text) {
  std::vector<index_type> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of(", ", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(pos, end - pos);
    if (!token.empty()) {
      long value = 0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (ec != std::errc() || ptr != token.data() + token.size() || value < 1) {
        throw InvalidInput("invalid direction index '" + std::string(token) +
                           "' (expected 1-based positive integers)");
      }
      out.push_back(static_cast<index_type>(value - 1));
    }
    pos = end + 1;
  }
  if (out.empty()) throw InvalidInput("empty direction");
  return Direction(std::move(out));
}

Direction Direction::from_one_based(std::span<const int> one_based) {
  std::vector<index_type> out;
  out.reserve(one_based.size());
  for (int i : one_based) {
    if (i < 1) throw InvalidInput("direction indices are 1-based");
    out.push_back(static_cast<index_type>(i - 1));
  }
  return Direction(std::move(out));
}

Direction Direction::positive_part(std::span<const double> values) {
  std::vector<index_type> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0) out.push_back(static_cast<index_type>(i));
  }
  Direction dir;
  dir.indices_ = std::move(out);  // already sorted
  return dir;
}

Direction Direction::full(std::size_t d) {
  std::vector<index_type> out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = static_cast<index_type>(i);
  return Direction(std::move(out));
}

bool Direction::contains(index_type i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool Direction::is_subset_of(const Direction& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

std::vector<Direction::index_type> Direction::complement(std::size_t d) const {
  std::vector<index_type> out;
  out.reserve(d > size() ? d - size() : 0);
  auto it = indices_.begin();
  for (std::size_t i = 0; i < d; ++i) {
    if (it != indices_.end() && *it == i) {
      ++it;
    } else {
      out.push_back(static_cast<index_type>(i));
    }
  }
  return out;
}

std::vector<int> Direction::one_based() const {
  std::vector<int> out;
  out.reserve(size());
  for (index_type i : indices_) out.push_back(static_cast<int>(i) + 1);
  return out;
}

std::string Direction::to_string() const {
  std::string out = "{";
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(indices_[k] + 1);
  }
  out += '}';
  return out;
}

}  // namespace srv

std::size_t std::hash<srv::Direction>::operator()(const srv::Direction& dir) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (auto i : dir.indices()) {
    h ^= static_cast<std::size_t>(i) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

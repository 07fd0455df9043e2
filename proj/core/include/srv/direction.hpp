#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace srv {

// A nonempty group of coordinates, stored as sorted unique 0-based indices.
// Text and JSON forms use 1-based column positions.
class Direction {
 public:
  using index_type = std::uint32_t;

  Direction() = default;
  explicit Direction(std::vector<index_type> indices);
  Direction(std::initializer_list<index_type> indices);

  // Parses "1,2,5" (1-based).
  static Direction parse_one_based(std::string_view text);
  static Direction from_one_based(std::span<const int> one_based);
  // {i : values[i] > 0}.
  static Direction positive_part(std::span<const double> values);
  static Direction full(std::size_t d);

  std::span<const index_type> indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(index_type i) const;
  bool is_subset_of(const Direction& other) const;
  bool is_strict_subset_of(const Direction& other) const {
    return size() < other.size() && is_subset_of(other);
  }
  // Indices of {0..d-1} not in this direction.
  std::vector<index_type> complement(std::size_t d) const;

  std::vector<int> one_based() const;
  std::string to_string() const;  // "{1,2}"

  friend bool operator==(const Direction&, const Direction&) = default;
  friend auto operator<=>(const Direction&, const Direction&) = default;

 private:
  std::vector<index_type> indices_;
};

}  // namespace srv

template <>
struct std::hash<srv::Direction> {
  std::size_t operator()(const srv::Direction& dir) const noexcept;
};

namespace srv {

template <class T>
using DirectionMap = std::unordered_map<Direction, T>;

}  // namespace srv

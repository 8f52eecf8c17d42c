#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace gaussriesz {

// Non-negative integer multi-index alpha in N_0^n.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries);

  static MultiIndex zero(int dim);
  static MultiIndex unit(int dim, int i);

  int dim() const { return static_cast<int>(entries_.size()); }
  int order() const { return order_; }
  int operator[](int i) const { return entries_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& entries() const { return entries_; }

  MultiIndex plus_unit(int i) const;
  // Requires entry i > 0.
  MultiIndex minus_unit(int i) const;

  // Componentwise >=.
  bool dominates(const MultiIndex& other) const;

  MultiIndex operator+(const MultiIndex& other) const;
  // Requires dominates(other).
  MultiIndex operator-(const MultiIndex& other) const;

  // alpha! = prod alpha_i!
  double factorial() const;

  std::string to_string(char sep = ',') const;
  static MultiIndex parse(std::string_view text);

  bool operator==(const MultiIndex& other) const { return entries_ == other.entries_; }
  std::strong_ordering operator<=>(const MultiIndex& other) const;

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

// All beta with |beta| == degree, in lexicographic order.
std::vector<MultiIndex> indices_of_degree(int dim, int degree);
// All beta with |beta| <= max_degree, grouped by total degree.
std::vector<MultiIndex> indices_up_to_degree(int dim, int max_degree);

}  // namespace gaussriesz

#include "gaussriesz/multiindex.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gaussriesz {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("multi-index must have dimension >= 1");
  for (int e : entries_) {
    if (e < 0) throw std::invalid_argument("multi-index entries must be non-negative");
  }
  order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::zero(int dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0));
}

MultiIndex MultiIndex::unit(int dim, int i) {
  MultiIndex e = zero(dim);
  return e.plus_unit(i);
}

MultiIndex MultiIndex::plus_unit(int i) const {
  if (i < 0 || i >= dim()) throw std::out_of_range("coordinate out of range");
  MultiIndex r = *this;
  ++r.entries_[static_cast<std::size_t>(i)];
  ++r.order_;
  return r;
}

MultiIndex MultiIndex::minus_unit(int i) const {
  if (i < 0 || i >= dim()) throw std::out_of_range("coordinate out of range");
  if (entries_[static_cast<std::size_t>(i)] == 0) {
    throw std::domain_error("cannot lower a zero entry");
  }
  MultiIndex r = *this;
  --r.entries_[static_cast<std::size_t>(i)];
  --r.order_;
  return r;
}

bool MultiIndex::dominates(const MultiIndex& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  for (int i = 0; i < dim(); ++i) {
    if ((*this)[i] < other[i]) return false;
  }
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  std::vector<int> e(entries_);
  for (int i = 0; i < dim(); ++i) e[static_cast<std::size_t>(i)] += other[i];
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!dominates(other)) throw std::domain_error("multi-index difference would be negative");
  std::vector<int> e(entries_);
  for (int i = 0; i < dim(); ++i) e[static_cast<std::size_t>(i)] -= other[i];
  return MultiIndex(std::move(e));
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int e : entries_) f *= std::tgamma(e + 1.0);
  return f;
}

std::string MultiIndex::to_string(char sep) const {
  std::string s;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(entries_[i]);
  }
  return s;
}

MultiIndex MultiIndex::parse(std::string_view text) {
  std::vector<int> e;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of(",:", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || p != tok.data() + tok.size()) {
      throw std::invalid_argument("malformed multi-index '" + std::string(text) + "'");
    }
    e.push_back(v);
    pos = end + 1;
  }
  return MultiIndex(std::move(e));
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
  if (auto c = order_ <=> other.order_; c != 0) return c;
  return entries_ <=> other.entries_;
}

namespace {

void fill_degree(int dim, int degree, int pos, std::vector<int>& cur,
                 std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    cur[static_cast<std::size_t>(pos)] = degree;
    out.emplace_back(cur);
    return;
  }
  for (int v = degree; v >= 0; --v) {
    cur[static_cast<std::size_t>(pos)] = v;
    fill_degree(dim, degree - v, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> indices_of_degree(int dim, int degree) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
  std::vector<MultiIndex> out;
  if (degree < 0) return out;
  std::vector<int> cur(static_cast<std::size_t>(dim), 0);
  fill_degree(dim, degree, 0, cur, out);
  return out;
}

std::vector<MultiIndex> indices_up_to_degree(int dim, int max_degree) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_degree; ++d) {
    auto level = indices_of_degree(dim, d);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

}  // namespace gaussriesz

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gaussriesz/format.hpp"
#include "gaussriesz/harness.hpp"

namespace gaussriesz {

double SampleRng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double SampleRng::log_uniform(double a, double b) {
  if (!(a > 0.0) || !(b >= a)) throw std::invalid_argument("log_uniform needs 0 < a <= b");
  return a * std::exp(uniform() * std::log(b / a));
}

double SampleRng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u = 0.0;
  while (u == 0.0) u = uniform();
  const double v = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u)), ang = 2.0 * std::numbers::pi * v;
  spare_ = rad * std::sin(ang);
  return rad * std::cos(ang);
}

Eigen::VectorXd SampleRng::unit_vector(int n) {
  Eigen::VectorXd v(n);
  double nn = 0.0;
  while (nn < 1e-12) {
    for (int i = 0; i < n; ++i) v(i) = normal();
    nn = v.norm();
  }
  return v / nn;
}

Eigen::VectorXd SampleRng::in_ball(const Eigen::VectorXd& center, double radius) {
  const int n = static_cast<int>(center.size());
  const Eigen::VectorXd u = unit_vector(n);
  return center + radius * std::pow(uniform(), 1.0 / n) * u;
}

void SweepReport::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns.size()) throw std::logic_error(experiment + ": row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body += ',';
    body += cells[i];
  }
  body += '\n';
  ++rows;
}

void SweepReport::param(const std::string& key, const std::string& value) { parameters.emplace_back(key, value); }

void SweepReport::set(const std::string& key, double value) {
  for (auto& [k, v] : observed) {
    if (k == key) {
      v = value;
      return;
    }
  }
  observed.emplace_back(key, value);
}

std::optional<double> SweepReport::get(const std::string& key) const {
  for (const auto& [k, v] : observed) {
    if (k == key) return v;
  }
  return std::nullopt;
}

void SweepReport::fail(const std::string& what) { failures.push_back(what); }

void SweepReport::merge_rows(const SweepReport& other) {
  if (other.columns != columns) throw std::logic_error("merging reports with different columns");
  body += other.body;
  rows += other.rows;
}

std::string cell(double v) { return format_double(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(std::size_t v) { return std::to_string(v); }

void write_csv(std::ostream& os, const SweepReport& r) {
  os << "# experiment: " << r.experiment << '\n';
  os << "# seed: " << r.seed << '\n';
  for (const auto& [k, v] : r.parameters) os << "# " << k << ": " << v << '\n';
  os << "# runtime_seconds: " << format_double(r.runtime_seconds) << '\n';
  for (const auto& [k, v] : r.observed) os << "# observed " << k << ": " << format_double(v) << '\n';
  os << "# violations: " << r.violations << '\n';
  for (const auto& f : r.failures) os << "# failure: " << f << '\n';
  for (const auto& n : r.notes) os << "# note: " << n << '\n';
  for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
  os << '\n' << r.body;
}

std::string csv_text(const SweepReport& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

std::vector<std::string> column(const SweepReport& r, const std::string& name) {
  const auto it = std::find(r.columns.begin(), r.columns.end(), name);
  if (it == r.columns.end()) throw std::invalid_argument(r.experiment + ": no column " + name);
  const auto idx = static_cast<std::size_t>(it - r.columns.begin());
  std::vector<std::string> out;
  std::istringstream body(r.body);
  for (std::string line; std::getline(body, line);) {
    std::istringstream ls(line);
    std::string c;
    for (std::size_t i = 0; i <= idx; ++i) std::getline(ls, c, ',');
    out.push_back(c);
  }
  return out;
}

}  // namespace gaussriesz

#include "gaussriesz/hermite_coeffs.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gaussriesz/hermite.hpp"

namespace gaussriesz {

HermiteCoeffs::HermiteCoeffs(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
}

HermiteCoeffs HermiteCoeffs::basis(const MultiIndex& beta, double coeff) {
  HermiteCoeffs f(beta.dim());
  f.set(beta, coeff);
  return f;
}

void HermiteCoeffs::check_dim(const MultiIndex& beta) const {
  if (beta.dim() != dim_) throw std::invalid_argument("multi-index dimension mismatch");
}

int HermiteCoeffs::max_degree() const {
  if (coeffs_.empty()) return -1;
  return coeffs_.rbegin()->first.order();
}

double HermiteCoeffs::operator()(const MultiIndex& beta) const {
  check_dim(beta);
  auto it = coeffs_.find(beta);
  return it == coeffs_.end() ? 0.0 : it->second;
}

void HermiteCoeffs::set(const MultiIndex& beta, double value) {
  check_dim(beta);
  coeffs_[beta] = value;
}

void HermiteCoeffs::add(const MultiIndex& beta, double value) {
  check_dim(beta);
  coeffs_[beta] += value;
}

double HermiteCoeffs::norm() const {
  double s = 0.0;
  for (const auto& [b, c] : coeffs_) s += c * c;
  return std::sqrt(s);
}

HermiteCoeffs& HermiteCoeffs::operator+=(const HermiteCoeffs& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("expansion dimension mismatch");
  for (const auto& [b, c] : other.coeffs_) coeffs_[b] += c;
  return *this;
}

HermiteCoeffs& HermiteCoeffs::operator-=(const HermiteCoeffs& other) {
  if (other.dim_ != dim_) throw std::invalid_argument("expansion dimension mismatch");
  for (const auto& [b, c] : other.coeffs_) coeffs_[b] -= c;
  return *this;
}

HermiteCoeffs& HermiteCoeffs::operator*=(double s) {
  for (auto& [b, c] : coeffs_) c *= s;
  return *this;
}

HermiteCoeffs HermiteCoeffs::truncated(int max_degree) const {
  HermiteCoeffs out(dim_);
  for (const auto& [b, c] : coeffs_) {
    if (b.order() <= max_degree) out.coeffs_.emplace_hint(out.coeffs_.end(), b, c);
  }
  return out;
}

HermiteCoeffs HermiteCoeffs::pruned(double tol) const {
  HermiteCoeffs out(dim_);
  for (const auto& [b, c] : coeffs_) {
    if (std::abs(c) > tol) out.coeffs_.emplace_hint(out.coeffs_.end(), b, c);
  }
  return out;
}

double HermiteCoeffs::evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim_) throw std::invalid_argument("point dimension mismatch");
  if (coeffs_.empty()) return 0.0;
  const int deg = max_degree();
  std::vector<double> table(static_cast<std::size_t>(dim_ * (deg + 1)));
  for (int i = 0; i < dim_; ++i) {
    hermite_normalized_table(deg, x(i), table.data() + i * (deg + 1));
  }
  double s = 0.0;
  for (const auto& [b, c] : coeffs_) {
    double v = c;
    for (int i = 0; i < dim_; ++i) v *= table[static_cast<std::size_t>(i * (deg + 1) + b[i])];
    s += v;
  }
  return s;
}

Eigen::VectorXd HermiteCoeffs::evaluate_many(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
  Eigen::VectorXd out(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) out(j) = evaluate(points.col(j));
  return out;
}

HermiteCoeffs operator+(HermiteCoeffs a, const HermiteCoeffs& b) { return a += b; }
HermiteCoeffs operator-(HermiteCoeffs a, const HermiteCoeffs& b) { return a -= b; }
HermiteCoeffs operator*(double s, HermiteCoeffs a) { return a *= s; }

double dot(const HermiteCoeffs& a, const HermiteCoeffs& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("expansion dimension mismatch");
  const HermiteCoeffs& small = a.size() <= b.size() ? a : b;
  const HermiteCoeffs& large = a.size() <= b.size() ? b : a;
  double s = 0.0;
  for (const auto& [beta, c] : small) s += c * large(beta);
  return s;
}

double max_abs_diff(const HermiteCoeffs& a, const HermiteCoeffs& b) {
  double m = 0.0;
  for (const auto& [beta, c] : a) m = std::max(m, std::abs(c - b(beta)));
  for (const auto& [beta, c] : b) m = std::max(m, std::abs(c - a(beta)));
  return m;
}

HermiteCoeffs lower(int i, const HermiteCoeffs& f) {
  if (i < 0 || i >= f.dim()) throw std::out_of_range("coordinate out of range");
  HermiteCoeffs out(f.dim());
  for (const auto& [beta, c] : f) {
    if (beta[i] == 0) continue;
    out.add(beta.minus_unit(i), std::sqrt(static_cast<double>(beta[i])) * c);
  }
  return out;
}

HermiteCoeffs raise(int i, const HermiteCoeffs& f) {
  if (i < 0 || i >= f.dim()) throw std::out_of_range("coordinate out of range");
  HermiteCoeffs out(f.dim());
  for (const auto& [beta, c] : f) {
    out.add(beta.plus_unit(i), std::sqrt(static_cast<double>(beta[i] + 1)) * c);
  }
  return out;
}

HermiteCoeffs apply_D(const MultiIndex& alpha, const HermiteCoeffs& f) {
  if (alpha.dim() != f.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  HermiteCoeffs out = f;
  for (int i = 0; i < alpha.dim(); ++i) {
    for (int j = 0; j < alpha[i]; ++j) out = lower(i, out);
  }
  return out;
}

HermiteCoeffs apply_Dstar(const MultiIndex& alpha, const HermiteCoeffs& f) {
  if (alpha.dim() != f.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  HermiteCoeffs out = f;
  for (int i = 0; i < alpha.dim(); ++i) {
    for (int j = 0; j < alpha[i]; ++j) out = raise(i, out);
  }
  return out;
}

HermiteCoeffs random_coeffs(int dim, int max_degree, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  HermiteCoeffs f(dim);
  for (const auto& beta : indices_up_to_degree(dim, max_degree)) f.set(beta, normal(rng));
  return f;
}

}  // namespace gaussriesz

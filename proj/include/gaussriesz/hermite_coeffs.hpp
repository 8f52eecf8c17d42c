#pragma once

#include <Eigen/Core>
#include <map>
#include <random>

#include "gaussriesz/multiindex.hpp"

namespace gaussriesz {

// Finite expansion f = sum_beta c_beta h_beta in the orthonormal Hermite basis.
class HermiteCoeffs {
 public:
  using Map = std::map<MultiIndex, double>;

  explicit HermiteCoeffs(int dim = 1);

  static HermiteCoeffs basis(const MultiIndex& beta, double coeff = 1.0);

  int dim() const { return dim_; }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return coeffs_.empty(); }
  // Largest |beta| with a stored coefficient, -1 when empty.
  int max_degree() const;

  double operator()(const MultiIndex& beta) const;
  void set(const MultiIndex& beta, double value);
  void add(const MultiIndex& beta, double value);

  Map::const_iterator begin() const { return coeffs_.begin(); }
  Map::const_iterator end() const { return coeffs_.end(); }

  // l^2 norm of the coefficients = L^2(gamma) norm of f.
  double norm() const;

  HermiteCoeffs& operator+=(const HermiteCoeffs& other);
  HermiteCoeffs& operator-=(const HermiteCoeffs& other);
  HermiteCoeffs& operator*=(double s);

  HermiteCoeffs truncated(int max_degree) const;
  HermiteCoeffs pruned(double tol = 0.0) const;

  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  // One value per column of points.
  Eigen::VectorXd evaluate_many(const Eigen::Ref<const Eigen::MatrixXd>& points) const;

 private:
  void check_dim(const MultiIndex& beta) const;

  int dim_;
  Map coeffs_;
};

HermiteCoeffs operator+(HermiteCoeffs a, const HermiteCoeffs& b);
HermiteCoeffs operator-(HermiteCoeffs a, const HermiteCoeffs& b);
HermiteCoeffs operator*(double s, HermiteCoeffs a);

double dot(const HermiteCoeffs& a, const HermiteCoeffs& b);
// max_beta |a_beta - b_beta|
double max_abs_diff(const HermiteCoeffs& a, const HermiteCoeffs& b);

// delta_i h_beta = sqrt(beta_i) h_{beta - e_i}
HermiteCoeffs lower(int i, const HermiteCoeffs& f);
// delta*_i h_beta = sqrt(beta_i + 1) h_{beta + e_i}
HermiteCoeffs raise(int i, const HermiteCoeffs& f);
HermiteCoeffs apply_D(const MultiIndex& alpha, const HermiteCoeffs& f);
HermiteCoeffs apply_Dstar(const MultiIndex& alpha, const HermiteCoeffs& f);

// Dense random expansion with standard normal coefficients, |beta| <= max_degree.
HermiteCoeffs random_coeffs(int dim, int max_degree, std::mt19937_64& rng);

}  // namespace gaussriesz

#pragma once

#include <Eigen/Core>
#include <array>
#include <memory>
#include <vector>

#include "gaussriesz/multiindex.hpp"

namespace gaussriesz {

// Monomial layout shared by all jets of one (dim, order).
struct JetLayout {
  int dim = 1;
  int order = 0;
  std::vector<std::array<int, 3>> exps;  // exponent tuples, graded
  std::vector<int> lookup;                // flat (order+1)^dim -> position or -1
  std::vector<double> factorials;         // beta! per position
  std::vector<std::array<int, 3>> products;  // (i, j, position of product) within the order

  int index(int e0, int e1 = 0, int e2 = 0) const;
  static std::shared_ptr<const JetLayout> get(int dim, int order);
};

// Truncated Taylor polynomial sum_beta c_beta h^beta around a base point.
class Jet {
 public:
  Jet(int dim, int order);
  static Jet constant(int dim, int order, double v);
  static Jet variable(int dim, int order, int i, double value);

  int dim() const { return layout_->dim; }
  int order() const { return layout_->order; }
  std::size_t size() const { return c_.size(); }
  double value() const { return c_[0]; }
  double coeff(const MultiIndex& beta) const;
  // partial^beta at the base point
  double derivative(const MultiIndex& beta) const;
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }
  const JetLayout& layout() const { return *layout_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s) { c_[0] += s; return *this; }

  // Drops terms above the given order.
  Jet truncated(int order) const;

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);

// f(a) from the Taylor coefficients f^{(j)}(a_0)/j!, j = 0..order.
Jet compose(const Jet& a, const std::vector<double>& taylor);
Jet exp(const Jet& a);
Jet reciprocal(const Jet& a);

// partial_i; the result has order one less.
Jet partial(const Jet& a, int i);
// L = -1/2 Laplacian + x . grad at base point x0; the result has order two less.
Jet apply_ou(const Jet& a, const Eigen::Ref<const Eigen::VectorXd>& x0);

// Jet of exp(-1/(1 - |x - c|^2/rho^2)) (zero outside the ball) at x0.
Jet bump_jet(const Eigen::Ref<const Eigen::VectorXd>& center, double radius,
             const Eigen::Ref<const Eigen::VectorXd>& x0, int order);

// Coordinate jets x0_i + h_i.
std::vector<Jet> coordinate_jets(const Eigen::Ref<const Eigen::VectorXd>& x0, int order);

}  // namespace gaussriesz

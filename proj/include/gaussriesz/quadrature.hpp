#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gaussriesz/hermite.hpp"

namespace gaussriesz {

template <typename Scalar>
struct GaussRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

namespace detail {

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> jacobi_eigenvalues(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& off_diagonal, int n) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diag = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> solver;
  solver.computeFromTridiagonal(diag, off_diagonal, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

}  // namespace detail

// Nodes/weights for the weight e^{-t^2} on the real line.
template <typename Scalar = double>
GaussRule<Scalar> gauss_hermite_rule(int n) {
  if (n < 1 || n > kMaxNormalizedDegree) throw std::out_of_range("Gauss-Hermite size out of range");
  using std::abs;
  using std::sqrt;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> off(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) off(j - 1) = sqrt(Scalar(j) / Scalar(2));
  GaussRule<Scalar> rule;
  rule.nodes = n == 1 ? Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(1)
                      : detail::jacobi_eigenvalues<Scalar>(off, n);
  rule.weights.resize(n);
  std::vector<Scalar> table(static_cast<std::size_t>(n + 1));
  const Scalar sqrt_pi = sqrt(Scalar(std::numbers::pi));
  for (int i = 0; i < n; ++i) {
    Scalar x = rule.nodes(i);
    // Newton polish on h_n, using h_n' = sqrt(2n) h_{n-1}.
    for (int it = 0; it < 3; ++it) {
      hermite_normalized_table<Scalar>(n, x, table.data());
      Scalar step = table[n] / (sqrt(Scalar(2 * n)) * table[n - 1]);
      if (!std::isfinite(static_cast<double>(step))) break;
      x -= step;
      if (abs(step) < Scalar(1e-3) * std::numeric_limits<Scalar>::epsilon()) break;
    }
    hermite_normalized_table<Scalar>(n - 1, x, table.data());
    Scalar s = 0;
    for (int j = 0; j < n; ++j) s += table[j] * table[j];
    rule.nodes(i) = x;
    rule.weights(i) = std::isfinite(static_cast<double>(s)) ? sqrt_pi / s : Scalar(0);
  }
  return rule;
}

// Nodes/weights for the weight 1 on [-1, 1].
template <typename Scalar = double>
GaussRule<Scalar> gauss_legendre_rule(int n) {
  if (n < 1) throw std::out_of_range("Gauss-Legendre size must be >= 1");
  using std::abs;
  using std::sqrt;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> off(std::max(n - 1, 0));
  for (int j = 1; j < n; ++j) off(j - 1) = Scalar(j) / sqrt(Scalar(4 * j * j - 1));
  GaussRule<Scalar> rule;
  rule.nodes = n == 1 ? Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(1)
                      : detail::jacobi_eigenvalues<Scalar>(off, n);
  rule.weights.resize(n);
  auto legendre = [n](Scalar x, Scalar& pn, Scalar& dpn) {
    Scalar p0 = 1, p1 = x;
    for (int j = 1; j < n; ++j) {
      Scalar p2 = (Scalar(2 * j + 1) * x * p1 - Scalar(j) * p0) / Scalar(j + 1);
      p0 = p1;
      p1 = p2;
    }
    pn = p1;
    dpn = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
  };
  for (int i = 0; i < n; ++i) {
    Scalar x = rule.nodes(i);
    Scalar pn, dpn;
    for (int it = 0; it < 4; ++it) {
      legendre(x, pn, dpn);
      Scalar step = pn / dpn;
      x -= step;
      if (abs(step) < Scalar(1e-3) * std::numeric_limits<Scalar>::epsilon()) break;
    }
    legendre(x, pn, dpn);
    rule.nodes(i) = x;
    rule.weights(i) = Scalar(2) / ((Scalar(1) - x * x) * dpn * dpn);
  }
  return rule;
}

// Cached double-precision Gauss-Legendre rule.
const GaussRule<double>& cached_legendre(int n);
const GaussRule<double>& cached_hermite(int n);

// Composite Gauss-Legendre over consecutive breakpoints.
struct LineRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
LineRule composite_legendre(const std::vector<double>& breakpoints, int nodes_per_panel);

// Breakpoints a, a*q, a*q^2, ... up to b (last point exactly b).
std::vector<double> geometric_breakpoints(double a, double b, double ratio);
// Breakpoints a, a+h, ... up to b with roughly uniform spacing h.
std::vector<double> uniform_breakpoints(double a, double b, double h);

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a), a > 0, x >= 0.
double gamma_q(double a, double x);

}  // namespace gaussriesz

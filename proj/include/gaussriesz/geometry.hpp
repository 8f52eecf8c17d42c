#pragma once

#include <Eigen/Core>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "gaussriesz/quadrature.hpp"

namespace gaussriesz {

// m(s) = 1 for s <= 1, 1/s otherwise.
double m_admissibility(double s);

// Plain Euclidean ball.
struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;

  int dim() const { return static_cast<int>(center.size()); }
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return (x - center).norm() < radius;
  }
  Ball scaled(double factor) const { return Ball{center, factor * radius}; }
};

// Ball with r_B <= m(|c_B|); the constructor rejects anything else.
class AdmissibleBall {
 public:
  AdmissibleBall(Eigen::VectorXd center, double radius);

  const Ball& ball() const { return ball_; }
  const Eigen::VectorXd& center() const { return ball_.center; }
  double radius() const { return ball_.radius; }
  int dim() const { return ball_.dim(); }

  // r_{B,y} = r_B / (2|y|), infinite at y = 0.
  double r_By(const Eigen::Ref<const Eigen::VectorXd>& y) const;

 private:
  Ball ball_;
};

// w_k(x) = 1 for k in {1,2}, 1 + |x|^{k-2} for k >= 3.
struct WeightFunction {
  int k = 1;
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    return k <= 2 ? 1.0 : 1.0 + std::pow(x.norm(), k - 2);
  }
};

// omega_k(r) = 1 for k <= 2, r^{k-2} for k >= 3.
inline double omega_k(int k, double r) { return k <= 2 ? 1.0 : std::pow(r, k - 2); }

inline double gamma_density(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return std::pow(std::numbers::pi, -0.5 * static_cast<double>(x.size())) * std::exp(-x.squaredNorm());
}

enum class Region { FullSpace, Ball, BallComplement };

// Nodes (one per column) and weights. Weights integrate against the
// Gaussian measure unless the grid was built as a Lebesgue patch.
struct QuadratureGrid {
  int dim = 1;
  Eigen::MatrixXd nodes;
  Eigen::VectorXd weights;
  Region region = Region::FullSpace;

  Eigen::Index size() const { return weights.size(); }
};

struct GridSpec {
  int nodes_per_axis = 40;   // full-space Gauss-Hermite
  int radial_nodes = 12;     // Gauss-Legendre nodes per radial panel
  int radial_panels = 4;     // panels across a ball radius
  int angular_nodes = 64;    // trapezoid nodes on the circle (n = 2), azimuth for n = 3
  int refinement = 0;        // each level doubles the panel counts
};

// Directions and surface weights on the unit sphere S^{n-1}.
struct SphereRule {
  Eigen::MatrixXd directions;
  Eigen::VectorXd weights;
};
SphereRule sphere_rule(int dim, int angular_nodes);

// Lebesgue polar patch sum_j w_j f(center + rho_j theta_j) over the radial rule.
QuadratureGrid polar_patch(const Eigen::Ref<const Eigen::VectorXd>& center, const LineRule& radial,
                           const SphereRule& sphere);

// Multiplies Lebesgue weights by the Gaussian density.
void to_gaussian_weights(QuadratureGrid& grid);

QuadratureGrid full_space_grid(int dim, int nodes_per_axis);
QuadratureGrid ball_grid(const Ball& ball, const GridSpec& spec);
// Region |x - c| > r out to where the Gaussian weight is negligible.
QuadratureGrid complement_grid(const Ball& ball, const GridSpec& spec);
// Radial breakpoints from r_in to r_out, geometric near r_in then uniform.
std::vector<double> radial_breakpoints(double r_in, double r_out, int refinement = 0);

template <typename F>
double integrate(const QuadratureGrid& grid, F&& f) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) s += grid.weights(j) * f(grid.nodes.col(j));
  return s;
}

double gamma_measure(const QuadratureGrid& grid);
double gamma_measure(const Ball& ball, const GridSpec& spec = {});
double gamma_complement_measure(const Ball& ball, const GridSpec& spec = {});

// gamma(2B)/gamma(B); empty when gamma(B) underflows.
std::optional<double> doubling_ratio(const AdmissibleBall& ball, const GridSpec& spec = {});

// (sum_j w_j |f|^p weight)^{1/p} for p in {1, 2}.
template <typename F>
double lp_norm(F&& f, int p, const QuadratureGrid& grid,
               const std::optional<WeightFunction>& weight = std::nullopt) {
  if (p != 1 && p != 2) throw std::invalid_argument("lp_norm supports p = 1 or 2");
  double s = 0.0;
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const auto x = grid.nodes.col(j);
    const double v = f(x);
    if (!std::isfinite(v)) throw std::domain_error("non-finite function value on a quadrature node");
    const double w = weight ? (*weight)(x) : 1.0;
    s += grid.weights(j) * w * (p == 1 ? std::abs(v) : v * v);
  }
  return p == 1 ? s : std::sqrt(s);
}

}  // namespace gaussriesz

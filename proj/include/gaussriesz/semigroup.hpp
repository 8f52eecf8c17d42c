#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "gaussriesz/geometry.hpp"
#include "gaussriesz/jets.hpp"
#include "gaussriesz/riesz_spectral.hpp"

namespace gaussriesz {

// Compactly supported function given through its Taylor jets.
struct JetFunction {
  Ball support;
  std::function<Jet(const Eigen::Ref<const Eigen::VectorXd>&, int)> jet;
  double scale = 0.0;  // smallest feature length; 0 means the support radius
};

// Riesz transforms through the Mehler semigroup:
//   old  D^a L^{-k/2} f       = Gamma(k/2)^{-1} int t^{k/2-1} e^{-kt} T_t(D^a f) dt
//   new  D*^a (L+I)^{-k/2} f  = Gamma(k/2)^{-1} int t^{k/2-1} e^{(k-1)t} T_t(D*^a f) dt
// T_t is applied on a tensor Gauss-Legendre grid over the support for t0 <= t <= t_split;
// below t0 the series T_t g = sum_j (-t)^j L^j g / j! is used, and above t_split the
// Mehler expansion T_t g = sum_b e^{-|b|t} <g, h_b> h_b, integrated in t exactly. For the new family the
// grid values of D*^a f are corrected so their discrete Hermite moments of degree
// below k vanish, since e^{(k-1)t} would amplify them.
struct SemigroupSettings {
  double y_panel = 0.05;     // y panel width / feature scale
  int min_y_panels = 12;     // per axis across the support
  int y_nodes = 8;
  double near_factor = 4.0;  // fine x panels on |x_i - c_i| < near_factor * radius
  double near_panel = 0.5;   // fine panel width / support radius
  double far_panel = 0.5;
  double x_extent = 6.5;
  int x_nodes = 6;
  double log_t_panel = 0.7;
  int t_nodes = 6;
  double t_split = 3.0;
  int chaos_degree = 16;     // per coordinate and total, above t_split
  int taylor_terms = 4;
  double small_t_width = 2.0;  // Mehler width at t0 in units of the y spacing

  void validate() const;
};

// Old transforms need f with zero Gaussian mean.
class SemigroupTransform {
 public:
  SemigroupTransform(RieszOrder order, JetFunction f, SemigroupSettings settings = {});

  double at(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd at_many(const Eigen::Ref<const Eigen::MatrixXd>& points) const;

  // Values on the tensor grid axes[0] x axes[1] (n = 2) or axes[0] (n = 1),
  // first index fastest.
  Eigen::VectorXd on_tensor(const std::vector<Eigen::VectorXd>& axes) const;

  double t0() const { return t0_; }
  const SemigroupSettings& settings() const { return settings_; }
  const RieszOrder& order() const { return order_; }

 private:
  Eigen::MatrixXd mehler_matrix(int axis, const Eigen::VectorXd& x, double t) const;
  double small_t_part(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  void remove_low_moments();
  void build_chaos();
  Eigen::MatrixXd hermite_table(const Eigen::VectorXd& x) const;

  RieszOrder order_;
  JetFunction f_;
  SemigroupSettings settings_;
  std::vector<Eigen::VectorXd> y_nodes_, y_weights_;
  Eigen::MatrixXd g_;  // D^a f or D*^a f on the y grid (n = 1: column vector)
  double t0_ = 0.0, rate_ = 0.0;
  std::vector<double> t_, wt_;     // t nodes in [t0, t_split] with weights incl. t^{k/2-1}e^{-rate t}/Gamma
  Eigen::MatrixXd chaos_;          // <g, h_b> times the time integral over [t_split, inf)
  std::vector<double> moments_;    // int_0^{t0} t^j t^{k/2-1} e^{-rate t} dt / Gamma, j < taylor_terms
};

// Jet of D^a f (old) or D*^a f (new); the order drops by |a|.
Jet riesz_derivative_jet(const RieszOrder& order, const Jet& f, const Eigen::Ref<const Eigen::VectorXd>& x0);

// x axis breakpoints: fine near the support, graded, then uniform to +-extent.
std::vector<double> semigroup_axis_breaks(double center, double radius, const SemigroupSettings& s);

struct L1Split {
  double total = 0.0;
  double near = 0.0;  // |x - c| < near_radius
  double far = 0.0;
};

// ||R f||_{L^1(gamma)} on the tensor x grid, split at |x - c| = near_radius.
L1Split riesz_l1_norm(const SemigroupTransform& tr, const Ball& ball, double near_radius);

}  // namespace gaussriesz

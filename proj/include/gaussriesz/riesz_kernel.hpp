#pragma once

#include <Eigen/Core>
#include <functional>

#include "gaussriesz/geometry.hpp"
#include "gaussriesz/multiindex.hpp"
#include "gaussriesz/riesz_spectral.hpp"

namespace gaussriesz {

enum class KernelFamily { Old, New, HalfPowerDerivative };

KernelFamily kernel_family(Family f);

// Multiplies the raw r-integral. Old/New kernels are calibrated against the
// spectral route; the half-power kernel carries its own prefactor.
struct KernelSpec {
  MultiIndex alpha;
  KernelFamily family = KernelFamily::Old;
  double normalization = 1.0;

  int order() const { return alpha.order(); }
  int dim() const { return alpha.dim(); }
  void validate() const;
};

// Panel layout of the r-integral. The piece r < 1/2 is integrated in
// t = -log r; the piece r > 1/2 in log s with s = l / sqrt(1 - r^2).
struct KernelQuadrature {
  int nodes_per_panel = 12;
  double log_s_panel = 0.5;      // panel width in log s
  double s_max = 20.0;           // largest s on the upper piece
  double t_max = 40.0;           // truncation of the lower piece
  int refinement = 0;            // each level halves all panel widths
  double min_separation = 1e-9;  // |x - y| below this is rejected
};

// s = l / sqrt(1 - r^2) solved for r, with dr/ds.
struct SSubstitution {
  double r;
  double dr_ds;
};
SSubstitution s_substitution(double l, double s);

// lambda_alpha(r) = ((-log r)/(1 - r^2))^{k/2 - 1}
double lambda_alpha(int k, double r);

// 2^{-k/2} pi^{-n/2} / Gamma(k/2): closed-form value the calibration is compared against.
double analytic_normalization(int n, int k);

double kernel_old(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& quad = {});
double kernel_new(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& quad = {});
// D^alpha_x of the kernel of L^{k/2}, k odd, off the diagonal.
double kernel_halfpower_derivative(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& quad = {});
// Dispatch on spec.family.
double kernel_value(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& quad = {});

// F_alpha(x,y,r) = H_alpha(u) e^{-|u|^2}, u = (x - r y)/sqrt(1 - r^2).
struct FAlphaEval {
  double value;
  Eigen::VectorXd grad_y;
};
FAlphaEval F_alpha(const MultiIndex& alpha, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y, double r);
Eigen::VectorXd grad_y_F(const MultiIndex& alpha, const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y, double r);

// Fitted C with |grad_y F_alpha| <= C (1-r^2)^{-1/2} e^{-|x-ry|^2/(2(1-r^2))}: twice the grid supremum of
// |alpha_i H_{alpha-e_i}(u) - u_i H_alpha(u)| e^{-|u|^2/2}, times the margin.
double gradient_bound_constant(const MultiIndex& alpha, double margin = 1.05);

struct PVConfig {
  double eps_outer = 1e-3;  // epsilon_1
  double eps_inner = 5e-4;  // epsilon_2
  int radial_nodes = 8;     // Gauss-Legendre nodes per radial panel
  int angular_nodes = 48;   // n = 2 trapezoid; azimuth count for n = 3
  double far_panel = 0.5;   // radial panel width away from x
  double tolerance = 1e-3;  // relative; disagreement above 10x flags the point
  KernelQuadrature r_quad{};
  void validate() const;
};

// Function with known compact support.
struct CompactFunction {
  std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)> f;
  Ball support;
};

struct PVResult {
  double value = 0.0;    // Richardson-extrapolated
  double coarse = 0.0;   // exclusion eps_outer
  double fine = 0.0;     // exclusion eps_inner
  bool excluded = false; // false when x is outside the support: plain quadrature
  bool reliable = true;
};

// Quadrature weights (kernel included) for evaluating T f(x) from values of f.
struct PVStencil {
  Eigen::VectorXd x;
  Eigen::MatrixXd nodes;
  Eigen::VectorXd w_coarse;  // pass with exclusion radius eps_outer
  Eigen::VectorXd w_fine;    // pass with exclusion radius eps_inner
  double local = 0.0;        // coefficient of f(x): c * integral of the kernel in y
  bool excluded = false;
};

// Raw y-integral of the kernel at x, M(x) (zero for the old family).
double kernel_y_integral(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

PVStencil build_pv_stencil(const KernelSpec& spec, const Ball& support, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const PVConfig& pv = {});
PVResult apply_stencil(const PVStencil& stencil, const Eigen::Ref<const Eigen::VectorXd>& f_nodes, double f_x,
                       const PVConfig& pv = {});
PVResult apply_riesz_pv(const KernelSpec& spec, const CompactFunction& f, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const PVConfig& pv = {});

}  // namespace gaussriesz

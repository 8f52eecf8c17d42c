#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaussriesz/geometry.hpp"
#include "gaussriesz/hermite_coeffs.hpp"
#include "gaussriesz/jets.hpp"
#include "gaussriesz/semigroup.hpp"

namespace gaussriesz {

using JetCallback = std::function<Jet(const Eigen::Ref<const Eigen::VectorXd>&, int)>;

// Polar grid about the profile center with radial breakpoints at rho2 and rho1,
// graded geometrically toward both edges where the bumps flatten out.
struct AtomGridSpec {
  int bulk_panels = 4;     // uniform panels per radial segment
  int grading_levels = 8;  // halvings toward each edge
  int panels_per_level = 1;
  int radial_nodes = 12;
  int angular_nodes = 96;

  // Finer edge grading for order 3, whose sixth derivatives peak at the bump edges.
  static AtomGridSpec for_order(int k);
};

// u = phi(|x - c|/rho1) - mix * phi(|x - c|/rho2), phi(t) = exp(-1/(1 - t^2)),
// with mix fixed by int u dgamma = 0.
class BumpProfile {
 public:
  BumpProfile(Eigen::VectorXd center, double rho1, double rho2);

  // Concentric profile with radii frac1 * r_B > frac2 * r_B, optionally shifted.
  static BumpProfile inside(const AdmissibleBall& ball, double frac1 = 0.9, double frac2 = 0.45,
                            const std::optional<Eigen::VectorXd>& shift = std::nullopt);

  const Eigen::VectorXd& center() const { return center_; }
  double rho1() const { return rho1_; }
  double rho2() const { return rho2_; }
  double mix() const { return mix_; }
  int dim() const { return static_cast<int>(center_.size()); }
  Ball support() const { return Ball{center_, rho1_}; }

  Jet jet(const Eigen::Ref<const Eigen::VectorXd>& x, int order) const;
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  Eigen::VectorXd center_;
  double rho1_, rho2_, mix_ = 0.0;
};

QuadratureGrid profile_grid(const BumpProfile& p, const AtomGridSpec& spec = {});
// Gaussian-weighted grid on B used for gamma(B) and B-restricted integrals.
QuadratureGrid atom_ball_grid(const Ball& ball);

struct AtomCertificate {
  double mean = 0.0;        // int a dgamma
  double l2 = 0.0;          // ||a||_2
  double gamma_ball = 0.0;  // gamma(B)
};

// A sampled function supported in an admissible ball, or the constant atom.
struct AtomSamples {
  std::optional<AdmissibleBall> ball;
  Ball support;            // closed region holding the support
  JetCallback jet;         // Taylor jets of the atom
  QuadratureGrid grid;     // Gaussian-weighted nodes on the support
  Eigen::VectorXd values;  // atom on grid nodes
  AtomCertificate certificate;

  int dim() const { return grid.dim; }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

class H1Atom {
 public:
  static H1Atom constant(int dim);
  explicit H1Atom(AtomSamples s) : s_(std::move(s)) {}

  bool is_constant() const { return !s_.ball.has_value(); }
  const AtomSamples& samples() const { return s_; }
  const AtomCertificate& certificate() const { return s_.certificate; }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return s_(x); }
  H1Atom scaled(double factor) const;
  JetFunction as_jet_function(double feature_scale = 0.0) const;

 private:
  AtomSamples s_;
};

// Mean-zero profile scaled to ||a||_2 = gamma(B)^{-1/2}.
H1Atom make_h1_atom(const AdmissibleBall& ball, const BumpProfile& profile, const AtomGridSpec& spec = {});

inline constexpr int kMaxAtomOrder = 3;

// a = t L^k u, t = omega_k(r_B) gamma(B)^{-1/2} / ||L^k u||_2.
class XkAtom {
 public:
  XkAtom(int k, AdmissibleBall ball, BumpProfile profile, double t, AtomSamples s)
      : k_(k), ball_(std::move(ball)), profile_(std::move(profile)), t_(t), s_(std::move(s)) {}

  int order() const { return k_; }
  const AdmissibleBall& ball() const { return ball_; }
  const BumpProfile& profile() const { return profile_; }
  double scale() const { return t_; }
  const AtomSamples& samples() const { return s_; }
  const AtomCertificate& certificate() const { return s_.certificate; }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return s_(x); }

  // Jet of L^{-j} a = t L^{k-j} u, 0 <= j <= k.
  Jet preimage_jet(int j, const Eigen::Ref<const Eigen::VectorXd>& x, int order) const;
  H1Atom as_h1_atom() const { return H1Atom(s_); }
  XkAtom scaled(double factor) const;
  JetFunction as_jet_function() const;

 private:
  int k_;
  AdmissibleBall ball_;
  BumpProfile profile_;
  double t_;
  AtomSamples s_;
};

XkAtom make_xk_atom(int k, const AdmissibleBall& ball, const BumpProfile& profile, const AtomGridSpec& spec);
XkAtom make_xk_atom(int k, const AdmissibleBall& ball, const BumpProfile& profile);

// Entire solutions of -1/2 v'' + s v' = g on the line as power series in s.
// harmonic(): L E = 0 with E(s) = int_0^s e^{t^2} dt. ladder(j): L h_j = h_{j-1}, h_0 = 1.
class ProbeSeries {
 public:
  static ProbeSeries harmonic();
  static ProbeSeries ladder(int j);

  double operator()(double s) const;
  // Evaluation is accurate for |s| below this.
  static constexpr double kRange = 9.0;

 private:
  std::vector<long double> a_;
};

// PrecisionLimited: the check failed, but the estimated rounding floor is itself near the tolerance.
enum class CheckStatus { Pass, Fail, TruncationLimited, PrecisionLimited };
std::string to_string(CheckStatus s);

struct AtomCheck {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  double value = 0.0;
  double bound = 0.0;
};

struct AtomReport {
  std::vector<AtomCheck> checks;
  double proposition_ratio = 0.0;  // ||L^{-j} a||_2 gamma(B)^{1/2} / r_B^{2j}
  double rounding_floor = 0.0;      // estimated rounding level of the reconstruction error
  double truncation_capture = 0.0;  // ||P_{<=N} Pi_0 L^{-j} a||_2 / ||Pi_0 L^{-j} a||_2
  // ||a||_{L^1(w_j gamma)} <= ||w_j 1_B||_2 ||a||_2 <= ||w_j 1_B||_2 omega_j gamma(B)^{-1/2} <= 1 + 2^{j-2}
  std::vector<double> weighted_chain;

  bool passed() const;
  const AtomCheck* find(const std::string& name) const;
};

// Reconstruction error is ||c_a/|b|^j - c_u||_{1<=|b|<=N} / ||Pi_0 u||_2 with u = L^{-j} a known.
struct ValidationSettings {
  int degree = 0;  // 0: 40 for n = 1, 30 for n = 2, 16 for n = 3
  double mean_tol = 1e-8;
  double reconstruction_tol = 1e-4;
  double tail_tol = 1e-4;
  double probe_tol = 1e-7;
  double slack = 1e-12;

  int degree_for(int n) const;
};

AtomReport validate_h1_atom(const H1Atom& a, const ValidationSettings& settings = {});
// X^j certificates, 1 <= j <= k.
AtomReport validate_xk_atom(const XkAtom& a, int j, const ValidationSettings& settings = {});
// X^j certificates for an atom whose preimage L^{-j} a is unknown.
AtomReport validate_as_xk(const H1Atom& a, int j, const ValidationSettings& settings = {});

}  // namespace gaussriesz

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gaussriesz/atoms.hpp"
#include "gaussriesz/calibration.hpp"
#include "gaussriesz/riesz_spectral.hpp"
#include "gaussriesz/semigroup.hpp"

namespace gaussriesz {

inline constexpr std::uint64_t kDefaultSeed = 20230607;

// Draws built directly on the 64-bit engine output so streams do not depend on
// the standard library's distribution implementations.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : eng_(seed) {}

  double uniform();  // [0, 1)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b);
  double normal();
  Eigen::VectorXd unit_vector(int n);
  Eigen::VectorXd in_ball(const Eigen::VectorXd& center, double radius);

 private:
  std::mt19937_64 eng_;
  std::optional<double> spare_;
};

// One experiment: CSV rows plus the observed constants behind its assertions.
struct SweepReport {
  std::string experiment;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> columns;
  std::string body;  // CSV rows, newline terminated
  std::size_t rows = 0;
  std::vector<std::pair<std::string, double>> observed;
  std::size_t violations = 0;         // exact-inequality violations
  std::vector<std::string> failures;  // failed assertions with record ids
  std::vector<std::string> notes;     // reported, not asserted
  double runtime_seconds = 0.0;

  bool passed() const { return violations == 0 && failures.empty(); }
  void add_row(const std::vector<std::string>& cells);
  void param(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  std::optional<double> get(const std::string& key) const;
  void fail(const std::string& what);
  // Appends another report's rows; columns must match.
  void merge_rows(const SweepReport& other);
};

std::string cell(double v);
std::string cell(int v);
std::string cell(std::size_t v);

// '#' metadata lines (including runtime) followed by the header and body.
void write_csv(std::ostream& os, const SweepReport& report);
std::string csv_text(const SweepReport& report);
// Cells of one column of the body, in row order.
std::vector<std::string> column(const SweepReport& report, const std::string& name);

// Ladder and spectral identities on random truncated expansions.
struct LadderSettings {
  int truncations = 100;
  int max_degree = 30;
  double tol = 1e-12;
  std::uint64_t seed = kDefaultSeed;
};
SweepReport check_ladder_identities(const LadderSettings& settings = {});

// Calibrated kernel route against the spectral route on masked random polynomials.
struct OracleSettings {
  std::vector<MultiIndex> alphas;  // empty: every |alpha| <= 3 for n = 1 and n = 2
  std::vector<Family> families{Family::Old, Family::New};
  int inputs = 50;
  int points = 20;
  int input_degree = 4;
  double point_radius = 1.5;
  double tol = 1e-3;
  std::vector<CalibrationRecord> calibration;  // missing entries are calibrated on the fly
  PVConfig pv{};
  std::uint64_t seed = kDefaultSeed;
};
SweepReport check_spectral_kernel_oracle(const OracleSettings& settings = {});

// 4|x - ry| >= |x - c_B| for x outside 2B, in both r_{B,y} regimes.
struct GeometrySettings {
  std::size_t samples = 100000;  // per regime and dimension
  std::vector<int> dims{1, 2, 3};
  double max_center = 6.0;
  std::uint64_t seed = kDefaultSeed;
};
SweepReport check_geometry_lemma(const GeometrySettings& settings = {});

// (1+s)^{n-2} e^{-delta s^2}
double phi_delta(int n, double delta, double s);
// (1-r^2)^{-n/2} int_{(2B)^c} e^{-delta|x-c_B|^2/(1-r^2)} dx with s = r_B/sqrt(1-r^2):
// closed form (pi/delta)^{n/2} Q(n/2, 4 delta s^2), and radial quadrature.
double phi_tail_closed_form(int n, double delta, double s);
double phi_tail_quadrature(int n, double delta, double s);

struct PhiSettings {
  double delta = 0.5;
  std::vector<int> dims{1, 2, 3};
  int balls = 20;
  int r_points = 50;
  double min_radius = 0.05;
  double quadrature_tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
};
SweepReport check_phi_bound(const PhiSettings& settings = {});

// ||D^alpha L^{k/2} f||_{L^1((4B)^c, gamma)} for alpha = k e_1, k odd.
double halfpower_far_norm(int k, const AdmissibleBall& ball, const BumpProfile& f);

struct HalfPowerSettings {
  std::vector<int> orders{1, 3};
  int dim = 1;
  std::vector<double> radii{0.4, 0.2, 0.1, 0.05};
  double center = 0.0;       // c_B = center * e_1
  double slope_below = 0.3;  // accepted slopes: [-2k - below, -2k + above]
  double slope_above = 0.5;
  std::uint64_t seed = kDefaultSeed;
};
SweepReport check_halfpower_scaling(const HalfPowerSettings& settings = {});

// Ball B(center, fraction * m(|center|)) with profile radii rho1 * r_B, rho2 * r_B
// around center + offset * r_B.
struct AtomSpec {
  Eigen::VectorXd center;
  double radius_fraction = 0.5;
  int k = 1;
  double rho1 = 0.9;
  double rho2 = 0.45;
  Eigen::VectorXd offset;  // empty: concentric

  AdmissibleBall ball() const;
  BumpProfile profile() const;
  std::string describe() const;
};

enum class AtomKind { Xk, H1 };
std::string to_string(AtomKind k);

// Centers uniform in |c| <= max_center, radius fractions log-uniform in [min_fraction, max_fraction].
struct FamilySettings {
  int count = 20;
  int dim = 1;
  int k = 1;
  double max_center = 3.0;
  double min_fraction = 0.05;
  double max_fraction = 0.9;
  bool offsets = false;  // radii 0.6, 0.3 about a random offset of length <= 0.35 (units of r_B)
  std::uint64_t seed = kDefaultSeed;
};
std::vector<AtomSpec> random_atom_family(const FamilySettings& settings);
// Fixed center, radius fractions first * ratio^i.
std::vector<AtomSpec> shrinking_atom_family(const Eigen::VectorXd& center, int k, int count, double first, double ratio,
                                            const Eigen::VectorXd& offset = {});

// Certificates of constructed X^k atoms, checked at j = k.
struct CertificateSettings {
  std::vector<std::vector<AtomSpec>> families;  // each family shrinks; proposition ratios compared within it
  std::vector<AtomSpec> scattered;              // certified only
  double ratio_spread = 10.0;
  ValidationSettings validation{};
  std::uint64_t seed = kDefaultSeed;
};
SweepReport certify_atom_families(const CertificateSettings& settings);

struct BoundednessSettings {
  MultiIndex alpha{1};
  Family family = Family::Old;
  AtomKind kind = AtomKind::Xk;
  std::vector<AtomSpec> atoms;
  bool include_constant = false;
  double near_factor = 4.0;      // near part is |x - c_B| < near_factor * r_B
  double blowup_factor = 5.0;    // sup <= blowup_factor * median
  double cross_check_tol = 1e-3;  // kernel route at c + r d/2 and c + 3r d/2, d the unit diagonal, relative to sup |R a|
  int cross_check_every = 1;       // every m-th atom; 0 disables
  PVConfig pv{};
  double pv_panels_per_radius = 16.0;  // far_panel capped at r_B / this
  double pv_eps_per_radius = 800.0;    // eps_outer capped at r_B / this
  SemigroupSettings semigroup{};
  std::uint64_t seed = kDefaultSeed;
  std::string experiment = "atom-sweep";
};
SweepReport sweep_atom_boundedness(const BoundednessSettings& settings);

// Shrinking off-centre H1 atoms and the matching X^k atoms on the same balls. The
// trend (log-log slope of the norm against 1/r_B) is reported, never asserted.
struct CounterprobeSettings {
  MultiIndex alpha{2, 0};
  Eigen::VectorXd center;  // empty: (1.5, 0)
  std::vector<double> fractions{0.8, 0.4, 0.2, 0.1, 0.05};
  Eigen::VectorXd offset;  // empty: (0.25, 0.15)
  SemigroupSettings semigroup{};
  std::uint64_t seed = kDefaultSeed;
};
SweepReport sweep_h1_counterprobe(const CounterprobeSettings& settings = {});

// int_{(2B)^c} s(x,y) dx and the Gaussian majorant I (times r_B: the nu_s quantities), each split into the
// r-ranges (0,1/2), (1/2, 1 - r_{B,y}), (1 - r_{B,y}, 1).
struct NuSample {
  double s_parts[3] = {0.0, 0.0, 0.0};
  double i_parts[3] = {0.0, 0.0, 0.0};
  double s_total() const { return s_parts[0] + s_parts[1] + s_parts[2]; }
  double i_total() const { return i_parts[0] + i_parts[1] + i_parts[2]; }
};
NuSample nu_s_sample(const MultiIndex& alpha, const AdmissibleBall& ball, const Eigen::VectorXd& y);

struct NuSettings {
  MultiIndex alpha{1};
  int samples = 100;
  double max_center = 3.0;
  double min_fraction = 0.01;
  double margin = 1.5;  // fitted constant = margin * max over the larger-ball half
  std::uint64_t seed = kDefaultSeed;
};
SweepReport estimate_nu_s(const NuSettings& settings = {});

}  // namespace gaussriesz

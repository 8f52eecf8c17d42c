#include "gaussriesz/atoms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gaussriesz/spectral.hpp"

namespace gaussriesz {

namespace {

constexpr int kMaxJetOrder = 16;
// Assumed relative error of atom values from jet arithmetic, in units of epsilon.
constexpr double kValueUlps = 8.0;
constexpr double kPrecisionShare = 0.25;

// sum_q w_q |f_q| |h_beta(x_q)|, the scale of rounding in hermite_project.
HermiteCoeffs hermite_abs_project(const QuadratureGrid& grid, const Eigen::VectorXd& abs_values, int max_degree) {
  const QuadratureGrid& g = grid;
  const int n = g.dim;
  const auto betas = indices_up_to_degree(n, max_degree);
  std::vector<double> acc(betas.size(), 0.0);
  std::vector<double> table(static_cast<std::size_t>(n * (max_degree + 1)));
  for (Eigen::Index q = 0; q < g.size(); ++q) {
    const double wv = g.weights(q) * abs_values(q);
    if (wv == 0.0) continue;
    for (int i = 0; i < n; ++i) hermite_normalized_table(max_degree, g.nodes(i, q), table.data() + i * (max_degree + 1));
    for (std::size_t b = 0; b < betas.size(); ++b) {
      double v = wv;
      for (int i = 0; i < n; ++i) v *= std::abs(table[static_cast<std::size_t>(i * (max_degree + 1) + betas[b][i])]);
      acc[b] += v;
    }
  }
  HermiteCoeffs out(n);
  for (std::size_t b = 0; b < betas.size(); ++b) out.set(betas[b], acc[b]);
  return out;
}

std::vector<double> graded_segment(double a, double e, int bulk, int levels, int per_level) {
  std::vector<double> br;
  const double len = e - a;
  for (int p = 0; p < bulk; ++p) br.push_back(a + 0.5 * len * p / bulk);
  for (int m = per_level; m <= levels * per_level; ++m) br.push_back(e - len * std::exp2(-static_cast<double>(m) / per_level));
  br.push_back(e);
  return br;
}

void check_inside(const AdmissibleBall& ball, const BumpProfile& profile) {
  if (profile.dim() != ball.dim()) throw std::invalid_argument("profile/ball dimension mismatch");
  if ((profile.center() - ball.center()).norm() + profile.rho1() >= ball.radius()) {
    throw std::invalid_argument("profile support must lie inside the open ball");
  }
}

Eigen::VectorXd sample(const QuadratureGrid& g, const std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>& f) {
  Eigen::VectorXd v(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) v(j) = f(g.nodes.col(j));
  return v;
}

Jet ou_power_jet(const BumpProfile& p, int k, const Eigen::Ref<const Eigen::VectorXd>& x, int order) {
  if (order < 0 || order + 2 * k > kMaxJetOrder) throw std::invalid_argument("jet order too high for L^k");
  Jet j = p.jet(x, order + 2 * k);
  for (int m = 0; m < k; ++m) j = apply_ou(j, x);
  return j;
}

AtomCertificate certify(const QuadratureGrid& g, const Eigen::VectorXd& values, double gamma_ball) {
  AtomCertificate c;
  c.gamma_ball = gamma_ball;
  c.mean = g.weights.dot(values);
  c.l2 = std::sqrt(g.weights.dot(values.cwiseAbs2()));
  return c;
}

std::vector<Eigen::VectorXd> probe_directions(int n) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < n; ++i) out.push_back(Eigen::VectorXd::Unit(n, i));
  if (n >= 2) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    d(0) = d(1) = std::sqrt(0.5);
    out.push_back(d);
  }
  return out;
}

AtomCheck make_check(std::string name, bool ok, double value, double bound) {
  return AtomCheck{std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, value, bound};
}

// Relative L^2(gamma) mass of the expansion outside the grid's ball.
double outside_mass(const HermiteCoeffs& c, const QuadratureGrid& g) {
  const double total = c.norm() * c.norm();
  if (total == 0.0) return 0.0;
  const Eigen::VectorXd v = c.evaluate_many(g.nodes);
  const double inside = g.weights.dot(v.cwiseAbs2());
  return std::max(total - inside, 0.0) / total;
}

// Coefficients c_beta / |beta|^j, beta != 0.
HermiteCoeffs invert_power(const HermiteCoeffs& c, int j) {
  HermiteCoeffs out(c.dim());
  for (const auto& [beta, v] : c) {
    if (beta.order() == 0) continue;
    out.set(beta, v / std::pow(static_cast<double>(beta.order()), j));
  }
  return out;
}

AtomReport validate_core(const AtomSamples& s, int j, const Eigen::VectorXd* preimage, const ValidationSettings& st) {
  AtomReport rep;
  const AdmissibleBall& B = *s.ball;
  const double r = B.radius(), gB = s.certificate.gamma_ball;
  const int n = s.dim();
  const double omega = omega_k(j, r);

  const double reach = ((s.support.center - B.center()).norm() + s.support.radius) / r;
  rep.checks.push_back(make_check("support", reach <= 1.0 + st.slack, reach, 1.0));
  rep.checks.push_back(make_check("mean", std::abs(s.certificate.mean) < st.mean_tol, std::abs(s.certificate.mean),
                                  st.mean_tol));
  const double l2_bound = omega / std::sqrt(gB);
  rep.checks.push_back(make_check("l2", s.certificate.l2 <= l2_bound * (1.0 + st.slack), s.certificate.l2, l2_bound));

  double worst = 0.0;
  std::vector<ProbeSeries> series{ProbeSeries::harmonic()};
  for (int m = 1; m <= j; ++m) series.push_back(ProbeSeries::ladder(m));
  for (const auto& dir : probe_directions(n)) {
    for (const auto& ps : series) {
      double pair = 0.0, vv = 0.0;
      for (Eigen::Index q = 0; q < s.grid.size(); ++q) {
        const double v = ps(dir.dot(s.grid.nodes.col(q)));
        pair += s.grid.weights(q) * s.values(q) * v;
        vv += s.grid.weights(q) * v * v;
      }
      const double den = s.certificate.l2 * std::sqrt(vv);
      if (den > 0.0) worst = std::max(worst, std::abs(pair) / den);
    }
  }
  rep.checks.push_back(make_check("probes", worst < st.probe_tol, worst, st.probe_tol));

  const QuadratureGrid bg = atom_ball_grid(B.ball());
  const int N = st.degree_for(n);
  const HermiteCoeffs ca = hermite_project(s.grid, s.values, N);
  const HermiteCoeffs urec = invert_power(ca, j);
  const double out_rec = outside_mass(urec, bg);
  double pre_norm = urec.norm();
  if (preimage != nullptr) {
    const HermiteCoeffs cp = hermite_project(s.grid, *preimage, N);
    const HermiteCoeffs cp0 = pi0(cp);
    const double mp = s.grid.weights.dot(*preimage);
    const double den = std::sqrt(std::max(s.grid.weights.dot(preimage->cwiseAbs2()) - mp * mp, 0.0));
    const double err = den > 0.0 ? (urec - cp0).norm() / den : urec.norm();
    rep.truncation_capture = den > 0.0 ? cp0.norm() / den : 1.0;
    const Eigen::VectorXd abs_a = s.values.cwiseAbs();
    const HermiteCoeffs mag = invert_power(hermite_abs_project(s.grid, abs_a, N), j);
    rep.rounding_floor = den > 0.0 ? kValueUlps * std::numeric_limits<double>::epsilon() * mag.norm() / den : 0.0;
    AtomCheck rc = make_check("reconstruction", err < st.reconstruction_tol, err, st.reconstruction_tol);
    if (rc.status == CheckStatus::Fail && rep.rounding_floor >= kPrecisionShare * st.reconstruction_tol) {
      rc.status = CheckStatus::PrecisionLimited;
    }
    rep.checks.push_back(rc);
    const double out_ref = outside_mass(cp0, bg);
    AtomCheck tail{"tail", CheckStatus::Pass, out_rec, st.tail_tol};
    if (out_rec >= st.tail_tol) {
      if (out_rec <= 1.05 * out_ref + 1e-10) {
        tail.status = CheckStatus::TruncationLimited;
      } else {
        tail.status = rc.status == CheckStatus::PrecisionLimited ? CheckStatus::PrecisionLimited : CheckStatus::Fail;
      }
    }
    rep.checks.push_back(tail);
    pre_norm = std::sqrt(s.grid.weights.dot(preimage->cwiseAbs2()));
  } else {
    rep.checks.push_back(make_check("tail", out_rec < st.tail_tol, out_rec, st.tail_tol));
  }
  rep.proposition_ratio = pre_norm * std::sqrt(gB) / std::pow(r, 2 * j);

  const WeightFunction w{j};
  double t1 = 0.0, wb = 0.0;
  for (Eigen::Index q = 0; q < s.grid.size(); ++q) t1 += s.grid.weights(q) * w(s.grid.nodes.col(q)) * std::abs(s.values(q));
  for (Eigen::Index q = 0; q < bg.size(); ++q) wb += bg.weights(q) * std::pow(w(bg.nodes.col(q)), 2);
  wb = std::sqrt(wb);
  const double t2 = wb * s.certificate.l2, t3 = wb * l2_bound, top = 1.0 + std::pow(2.0, j - 2);
  rep.weighted_chain = {t1, t2, t3, top};
  const double sl = 1.0 + st.slack;
  rep.checks.push_back(make_check("weighted-chain", t1 <= t2 * sl && t2 <= t3 * sl && t3 <= top * sl, t1, top));
  return rep;
}

}  // namespace

BumpProfile::BumpProfile(Eigen::VectorXd center, double rho1, double rho2)
    : center_(std::move(center)), rho1_(rho1), rho2_(rho2) {
  if (center_.size() < 1 || center_.size() > 3) throw std::invalid_argument("profile dimension must be 1..3");
  if (!(rho2_ > 0.0) || !(rho2_ < rho1_)) throw std::invalid_argument("profile needs 0 < rho2 < rho1");
  if (rho2_ > (1.0 - 1e-3) * rho1_) throw std::invalid_argument("profile degenerate: bumps nearly proportional");
  const auto g = profile_grid(*this);
  double i1 = 0.0, i2 = 0.0;
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    i1 += g.weights(j) * bump_jet(center_, rho1_, g.nodes.col(j), 0).value();
    i2 += g.weights(j) * bump_jet(center_, rho2_, g.nodes.col(j), 0).value();
  }
  if (!(i2 > std::numeric_limits<double>::min()) || !std::isfinite(i1)) {
    throw std::invalid_argument("profile degenerate: Gaussian mass underflows");
  }
  mix_ = i1 / i2;
}

BumpProfile BumpProfile::inside(const AdmissibleBall& ball, double frac1, double frac2,
                                const std::optional<Eigen::VectorXd>& shift) {
  Eigen::VectorXd c = ball.center();
  if (shift) {
    if (shift->size() != c.size()) throw std::invalid_argument("shift dimension mismatch");
    c += *shift;
  }
  BumpProfile p(c, frac1 * ball.radius(), frac2 * ball.radius());
  check_inside(ball, p);
  return p;
}

Jet BumpProfile::jet(const Eigen::Ref<const Eigen::VectorXd>& x, int order) const {
  return bump_jet(center_, rho1_, x, order) - bump_jet(center_, rho2_, x, order) * mix_;
}

double BumpProfile::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return jet(x, 0).value(); }

QuadratureGrid profile_grid(const BumpProfile& p, const AtomGridSpec& spec) {
  if (spec.bulk_panels < 1 || spec.grading_levels < 1 || spec.panels_per_level < 1 || spec.radial_nodes < 2) {
    throw std::invalid_argument("bad atom grid spec");
  }
  auto br = graded_segment(0.0, p.rho2(), spec.bulk_panels, spec.grading_levels, spec.panels_per_level);
  auto outer = graded_segment(p.rho2(), p.rho1(), spec.bulk_panels, spec.grading_levels, spec.panels_per_level);
  br.insert(br.end(), outer.begin() + 1, outer.end());
  auto g = polar_patch(p.center(), composite_legendre(br, spec.radial_nodes), sphere_rule(p.dim(), spec.angular_nodes));
  to_gaussian_weights(g);
  return g;
}

QuadratureGrid atom_ball_grid(const Ball& ball) {
  GridSpec gs;
  gs.radial_panels = 8;
  gs.radial_nodes = 12;
  gs.angular_nodes = 96;
  return ball_grid(ball, gs);
}

double AtomSamples::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (!ball) return 1.0;
  if ((x - support.center).norm() >= support.radius) return 0.0;
  return jet(x, 0).value();
}

H1Atom H1Atom::constant(int dim) {
  AtomSamples s;
  s.support = Ball{Eigen::VectorXd::Zero(dim), std::numeric_limits<double>::infinity()};
  s.jet = [dim](const Eigen::Ref<const Eigen::VectorXd>&, int order) { return Jet::constant(dim, order, 1.0); };
  s.grid.dim = dim;
  s.certificate = AtomCertificate{1.0, 1.0, 1.0};
  return H1Atom(std::move(s));
}

H1Atom H1Atom::scaled(double factor) const {
  AtomSamples s = s_;
  s.jet = [f = s_.jet, factor](const Eigen::Ref<const Eigen::VectorXd>& x, int order) { return f(x, order) * factor; };
  s.values *= factor;
  s.certificate.mean *= factor;
  s.certificate.l2 *= std::abs(factor);
  return H1Atom(std::move(s));
}

JetFunction H1Atom::as_jet_function(double feature_scale) const {
  if (is_constant()) throw std::invalid_argument("the constant atom has no compact support");
  return JetFunction{s_.support, s_.jet, feature_scale};
}

H1Atom make_h1_atom(const AdmissibleBall& ball, const BumpProfile& profile, const AtomGridSpec& spec) {
  check_inside(ball, profile);
  AtomSamples s;
  s.ball = ball;
  s.support = profile.support();
  s.grid = profile_grid(profile, spec);
  const Eigen::VectorXd u = sample(s.grid, [&](const auto& x) { return profile(x); });
  const double gB = atom_ball_grid(ball.ball()).weights.sum();
  const double nu = std::sqrt(s.grid.weights.dot(u.cwiseAbs2()));
  const Eigen::VectorXd phi1 =
      sample(s.grid, [&](const auto& x) { return bump_jet(profile.center(), profile.rho1(), x, 0).value(); });
  if (!(nu > 1e-6 * std::sqrt(s.grid.weights.dot(phi1.cwiseAbs2())))) {
    throw std::invalid_argument("profile degenerate: bumps nearly cancel");
  }
  const double scale = 1.0 / (std::sqrt(gB) * nu);
  s.jet = [profile, scale](const Eigen::Ref<const Eigen::VectorXd>& x, int order) { return profile.jet(x, order) * scale; };
  s.values = u * scale;
  s.certificate = certify(s.grid, s.values, gB);
  return H1Atom(std::move(s));
}

Jet XkAtom::preimage_jet(int j, const Eigen::Ref<const Eigen::VectorXd>& x, int order) const {
  if (j < 0 || j > k_) throw std::invalid_argument("preimage order outside [0, k]");
  return ou_power_jet(profile_, k_ - j, x, order) * t_;
}

XkAtom XkAtom::scaled(double factor) const {
  AtomSamples s = H1Atom(s_).scaled(factor).samples();
  return XkAtom(k_, ball_, profile_, t_ * factor, std::move(s));
}

JetFunction XkAtom::as_jet_function() const { return JetFunction{s_.support, s_.jet, profile_.rho2()}; }

XkAtom make_xk_atom(int k, const AdmissibleBall& ball, const BumpProfile& profile, const AtomGridSpec& spec) {
  if (k < 1 || k > kMaxAtomOrder) throw std::invalid_argument("atom order must be 1..3");
  check_inside(ball, profile);
  AtomSamples s;
  s.ball = ball;
  s.support = profile.support();
  s.grid = profile_grid(profile, spec);
  const double gB = atom_ball_grid(ball.ball()).weights.sum();
  const Eigen::VectorXd lu = sample(s.grid, [&](const auto& x) { return ou_power_jet(profile, k, x, 0).value(); });
  if (!lu.allFinite() || lu.cwiseAbs().maxCoeff() > 1e300) {
    throw std::overflow_error("jet overflow: profile too spiky for r_B; use a wider inner radius");
  }
  const double nl = std::sqrt(s.grid.weights.dot(lu.cwiseAbs2()));
  if (!(nl > 0.0)) throw std::invalid_argument("profile degenerate: L^k u vanishes");
  const double t = omega_k(k, ball.radius()) / (std::sqrt(gB) * nl);
  s.jet = [profile, k, t](const Eigen::Ref<const Eigen::VectorXd>& x, int order) {
    return ou_power_jet(profile, k, x, order) * t;
  };
  s.values = lu * t;
  s.certificate = certify(s.grid, s.values, gB);
  return XkAtom(k, ball, profile, t, std::move(s));
}

XkAtom make_xk_atom(int k, const AdmissibleBall& ball, const BumpProfile& profile) {
  return make_xk_atom(k, ball, profile, AtomGridSpec::for_order(k));
}

AtomGridSpec AtomGridSpec::for_order(int k) {
  AtomGridSpec g;
  if (k >= 3) g.panels_per_level = 2;
  return g;
}

namespace {
constexpr int kSeriesTerms = 1600;
}

ProbeSeries ProbeSeries::harmonic() {
  ProbeSeries p;
  p.a_.assign(kSeriesTerms, 0.0L);
  p.a_[1] = 1.0L;
  for (int m = 1; m + 2 < kSeriesTerms; m += 2) p.a_[m + 2] = 2.0L * m * p.a_[m] / ((m + 1.0L) * (m + 2.0L));
  return p;
}

ProbeSeries ProbeSeries::ladder(int j) {
  if (j < 0) throw std::invalid_argument("ladder index must be >= 0");
  std::vector<long double> g(kSeriesTerms, 0.0L);
  g[0] = 1.0L;
  for (int level = 1; level <= j; ++level) {
    std::vector<long double> a(kSeriesTerms, 0.0L);
    for (int m = 0; m + 2 < kSeriesTerms; ++m) a[m + 2] = 2.0L * (m * a[m] - g[m]) / ((m + 1.0L) * (m + 2.0L));
    g = std::move(a);
  }
  ProbeSeries p;
  p.a_ = std::move(g);
  return p;
}

double ProbeSeries::operator()(double s) const {
  if (!(std::abs(s) <= kRange)) throw std::domain_error("probe argument outside the series range");
  long double acc = 0.0L;
  const long double x = s;
  for (auto it = a_.rbegin(); it != a_.rend(); ++it) acc = acc * x + *it;
  return static_cast<double>(acc);
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::TruncationLimited:
      return "truncation-limited";
    case CheckStatus::PrecisionLimited:
      return "precision-limited";
  }
  return "?";
}

bool AtomReport::passed() const {
  for (const auto& c : checks) {
    if (c.status == CheckStatus::Fail || c.status == CheckStatus::PrecisionLimited) return false;
  }
  return true;
}

const AtomCheck* AtomReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

int ValidationSettings::degree_for(int n) const {
  if (degree > 0) return degree;
  return n == 1 ? 40 : n == 2 ? 30 : 16;
}

AtomReport validate_h1_atom(const H1Atom& a, const ValidationSettings& st) {
  AtomReport rep;
  const auto& s = a.samples();
  if (a.is_constant()) {
    rep.checks.push_back(make_check("constant", true, 1.0, 1.0));
    return rep;
  }
  const AdmissibleBall& B = *s.ball;
  const double reach = ((s.support.center - B.center()).norm() + s.support.radius) / B.radius();
  rep.checks.push_back(make_check("support", reach <= 1.0 + st.slack, reach, 1.0));
  rep.checks.push_back(make_check("mean", std::abs(s.certificate.mean) < st.mean_tol, std::abs(s.certificate.mean),
                                  st.mean_tol));
  const double bound = 1.0 / std::sqrt(s.certificate.gamma_ball);
  rep.checks.push_back(make_check("l2", s.certificate.l2 <= bound * (1.0 + st.slack), s.certificate.l2, bound));
  return rep;
}

AtomReport validate_xk_atom(const XkAtom& a, int j, const ValidationSettings& st) {
  if (j < 1 || j > a.order()) throw std::invalid_argument("validation order outside [1, k]");
  const auto& g = a.samples().grid;
  const Eigen::VectorXd pre = sample(g, [&](const auto& x) { return a.preimage_jet(j, x, 0).value(); });
  return validate_core(a.samples(), j, &pre, st);
}

AtomReport validate_as_xk(const H1Atom& a, int j, const ValidationSettings& st) {
  if (a.is_constant()) throw std::invalid_argument("the constant atom is not an X^k atom");
  if (j < 1) throw std::invalid_argument("validation order must be >= 1");
  return validate_core(a.samples(), j, nullptr, st);
}

}  // namespace gaussriesz

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gaussriesz/format.hpp"
#include "gaussriesz/harness.hpp"
#include "gaussriesz/hermite.hpp"
#include "gaussriesz/parallel.hpp"
#include "gaussriesz/quadrature.hpp"
#include "gaussriesz/riesz_kernel.hpp"

namespace gaussriesz {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string vec_text(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ":" : "") + format_double(v(i));
  return s;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// ||h_m||_{L^1(gamma_1)} with breakpoints at the roots.
double hermite_l1_1d(int m) {
  std::vector<double> br{-9.0, 9.0};
  if (m > 0) {
    const auto roots = gauss_hermite_rule<double>(m);
    for (Eigen::Index i = 0; i < roots.nodes.size(); ++i) br.push_back(roots.nodes(i));
  }
  for (double x = -8.5; x < 9.0; x += 0.5) br.push_back(x);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return b - a < 1e-9; }), br.end());
  const auto rule = composite_legendre(br, 12);
  double acc = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double x = rule.nodes[j];
    acc += rule.weights[j] * std::abs(hermite_normalized_1d<double>(m, x)) * std::exp(-x * x);
  }
  return acc / std::sqrt(std::numbers::pi);
}

// The spectral image of the constant atom is a single Hermite term.
double constant_image_l1(const RieszOrder& order) {
  const HermiteCoeffs img = riesz_apply(order, HermiteCoeffs::basis(MultiIndex::zero(order.dim())));
  if (img.empty()) return 0.0;
  if (img.size() != 1) throw std::logic_error("constant atom image is not a single Hermite term");
  const auto& [beta, c] = *img.begin();
  double v = std::abs(c);
  for (int i = 0; i < beta.dim(); ++i) v *= hermite_l1_1d(beta[i]);
  return v;
}

struct AtomResult {
  std::string route;
  L1Split split;
  double cross_check = 0.0;
  bool checked = false;
  std::string error;
};

}  // namespace

AdmissibleBall AtomSpec::ball() const { return AdmissibleBall(center, radius_fraction * m_admissibility(center.norm())); }

BumpProfile AtomSpec::profile() const {
  const AdmissibleBall b = ball();
  if (offset.size() == 0) return BumpProfile::inside(b, rho1, rho2);
  return BumpProfile::inside(b, rho1, rho2, Eigen::VectorXd(offset * b.radius()));
}

std::string AtomSpec::describe() const {
  std::ostringstream os;
  os << "c=" << vec_text(center) << " frac=" << format_double(radius_fraction) << " k=" << k;
  if (offset.size()) os << " offset=" << vec_text(offset);
  return os.str();
}

std::string to_string(AtomKind k) { return k == AtomKind::Xk ? "xk" : "h1"; }

std::vector<AtomSpec> random_atom_family(const FamilySettings& st) {
  if (st.count < 0 || st.dim < 1 || st.dim > 3) throw std::invalid_argument("bad atom family settings");
  if (!(st.min_fraction > 0.0) || !(st.max_fraction >= st.min_fraction) || st.max_fraction > 1.0) {
    throw std::invalid_argument("radius fractions must satisfy 0 < min <= max <= 1");
  }
  SampleRng rng(st.seed);
  std::vector<AtomSpec> out;
  for (int i = 0; i < st.count; ++i) {
    AtomSpec a;
    a.k = st.k;
    a.center = rng.uniform(0.0, st.max_center) * rng.unit_vector(st.dim);
    a.radius_fraction = rng.log_uniform(st.min_fraction, st.max_fraction);
    if (st.offsets) {
      a.rho1 = 0.6;
      a.rho2 = 0.3;
      a.offset = rng.in_ball(Eigen::VectorXd::Zero(st.dim), 0.35);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<AtomSpec> shrinking_atom_family(const Eigen::VectorXd& center, int k, int count, double first, double ratio,
                                            const Eigen::VectorXd& offset) {
  std::vector<AtomSpec> out;
  double f = first;
  for (int i = 0; i < count; ++i, f *= ratio) {
    AtomSpec a;
    a.center = center;
    a.k = k;
    a.radius_fraction = f;
    a.offset = offset;
    out.push_back(std::move(a));
  }
  return out;
}

SweepReport certify_atom_families(const CertificateSettings& st) {
  const auto t0 = Clock::now();
  SweepReport rep;
  rep.experiment = "atom-certificates";
  rep.seed = st.seed;
  rep.param("families", cell(st.families.size()));
  rep.param("scattered", cell(st.scattered.size()));
  rep.param("ratio_spread", cell(st.ratio_spread));
  rep.param("reconstruction_tol", cell(st.validation.reconstruction_tol));
  rep.columns = {"family", "id", "n", "k", "c_norm", "r_B", "support", "mean", "l2", "reconstruction", "tail", "tail_status",
                 "probes", "weighted_norm", "weighted_bound", "proposition_ratio", "rounding_floor", "status"};
  std::size_t atoms = 0, passed = 0, chain_violations = 0;
  double worst_spread = 0.0;
  std::vector<std::vector<AtomSpec>> groups = st.families;
  if (!st.scattered.empty()) groups.push_back(st.scattered);
  for (std::size_t fi = 0; fi < groups.size(); ++fi) {
    const auto& fam = groups[fi];
    const bool shrinking = fi < st.families.size();
    std::vector<AtomReport> reports(fam.size());
    std::vector<std::string> errors(fam.size());
    parallel_for(fam.size(), [&](std::size_t i) {
      try {
        const auto& spec = fam[i];
        reports[i] = validate_xk_atom(make_xk_atom(spec.k, spec.ball(), spec.profile()), spec.k, st.validation);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    double lo = INFINITY, hi = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const auto& spec = fam[i];
      const std::string id = "family " + std::to_string(fi) + " atom " + std::to_string(i) + " (" + spec.describe() + ")";
      ++atoms;
      if (!errors[i].empty()) {
        rep.fail(id + ": " + errors[i]);
        continue;
      }
      const AtomReport& r = reports[i];
      auto status_of = [&](const std::string& name) {
        const AtomCheck* c = r.find(name);
        return c ? to_string(c->status) : std::string("-");
      };
      auto value_of = [&](const std::string& name) {
        const AtomCheck* c = r.find(name);
        return c ? cell(c->value) : std::string("-");
      };
      const double top = r.weighted_chain.back();
      if (!(r.weighted_chain.front() <= top)) {
        ++chain_violations;
        ++rep.violations;
        rep.fail(id + ": weighted norm " + cell(r.weighted_chain.front()) + " above " + cell(top));
      }
      if (r.passed()) {
        ++passed;
      } else {
        std::string which;
        for (const auto& c : r.checks) {
          if (c.status == CheckStatus::Fail || c.status == CheckStatus::PrecisionLimited) {
            which += " " + c.name + "=" + to_string(c.status);
          }
        }
        rep.fail(id + ":" + which);
      }
      lo = std::min(lo, r.proposition_ratio);
      hi = std::max(hi, r.proposition_ratio);
      rep.add_row({cell(fi), cell(i), cell(static_cast<int>(spec.center.size())), cell(spec.k), cell(spec.center.norm()),
                   cell(spec.ball().radius()), status_of("support"), value_of("mean"), value_of("l2"),
                   value_of("reconstruction"), value_of("tail"), status_of("tail"), value_of("probes"), cell(r.weighted_chain.front()),
                   cell(top), cell(r.proposition_ratio), cell(r.rounding_floor), r.passed() ? "pass" : "fail"});
    }
    if (shrinking && hi > 0.0) {
      const double spread = hi / lo;
      worst_spread = std::max(worst_spread, spread);
      rep.set("family" + std::to_string(fi) + "_ratio_spread", spread);
      if (!(spread <= st.ratio_spread)) {
        rep.fail("family " + std::to_string(fi) + ": proposition ratio spread " + cell(spread));
      }
    }
  }
  rep.set("atoms", static_cast<double>(atoms));
  rep.set("passed", static_cast<double>(passed));
  rep.set("weighted_violations", static_cast<double>(chain_violations));
  rep.set("max_ratio_spread", worst_spread);
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

SweepReport sweep_atom_boundedness(const BoundednessSettings& st) {
  const auto t0 = Clock::now();
  const RieszOrder order(st.alpha, st.family);
  const int n = st.alpha.dim(), k = st.alpha.order();
  if (k < 1) throw std::invalid_argument("atom sweep needs |alpha| >= 1");
  SweepReport rep;
  rep.experiment = st.experiment;
  rep.seed = st.seed;
  rep.param("alpha", st.alpha.to_string(':'));
  rep.param("family", to_string(st.family));
  rep.param("kind", to_string(st.kind));
  rep.param("atoms", cell(st.atoms.size()));
  rep.param("near_factor", cell(st.near_factor));
  rep.param("blowup_factor", cell(st.blowup_factor));
  rep.param("y_panel", cell(st.semigroup.y_panel));
  rep.param("chaos_degree", cell(st.semigroup.chaos_degree));
  rep.columns = {"id", "n", "alpha", "family", "kind", "c_norm", "r_B", "route", "l1", "near", "far", "cross_check"};
  std::vector<AtomResult> res(st.atoms.size());
  const KernelSpec kspec{st.alpha, kernel_family(st.family), analytic_normalization(n, k)};
  parallel_for(st.atoms.size(), [&](std::size_t i) {
    const AtomSpec& spec = st.atoms[i];
    AtomResult& out = res[i];
    try {
      if (spec.center.size() != n) throw std::invalid_argument("atom dimension does not match alpha");
      const AdmissibleBall ball = spec.ball();
      const BumpProfile prof = spec.profile();
      const double rb = ball.radius();
      std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)> atom, image;
      std::optional<SemigroupTransform> tr;
      if (st.kind == AtomKind::Xk) {
        const XkAtom a = make_xk_atom(k, ball, prof);
        atom = [a](const Eigen::Ref<const Eigen::VectorXd>& x) { return a(x); };
        if (st.family == Family::Old && k % 2 == 0) {
          // L^{-k/2} a = t L^{k/2} u is known in closed form and D^alpha is local.
          out.route = "preimage";
          image = [a, order, k](const Eigen::Ref<const Eigen::VectorXd>& x) {
            return riesz_derivative_jet(order, a.preimage_jet(k / 2, x, k), x).value();
          };
          const QuadratureGrid& g = a.samples().grid;
          double l1 = 0.0;
          for (Eigen::Index j = 0; j < g.size(); ++j) l1 += g.weights(j) * std::abs(image(g.nodes.col(j)));
          out.split = L1Split{l1, l1, 0.0};
        } else {
          out.route = "semigroup";
          tr.emplace(order, a.as_jet_function(), st.semigroup);
        }
      } else {
        const H1Atom a = make_h1_atom(ball, prof);
        atom = [a](const Eigen::Ref<const Eigen::VectorXd>& x) { return a(x); };
        out.route = "semigroup";
        tr.emplace(order, a.as_jet_function(prof.rho2()), st.semigroup);
      }
      if (tr) {
        out.split = riesz_l1_norm(*tr, ball.ball(), st.near_factor * rb);
        image = [&tr](const Eigen::Ref<const Eigen::VectorXd>& x) { return tr->at(x); };
      }
      if (st.cross_check_every > 0 && i % static_cast<std::size_t>(st.cross_check_every) == 0) {
        PVConfig pv = st.pv;
        pv.far_panel = std::min(pv.far_panel, rb / st.pv_panels_per_radius);
        pv.eps_outer = std::min(pv.eps_outer, rb / st.pv_eps_per_radius);
        pv.eps_inner = std::min(pv.eps_inner, 0.5 * pv.eps_outer);
        const CompactFunction cf{atom, prof.support()};
        // Scale: sup of the transform along the diagonal diameter of the support. A
        // coordinate axis can be a nodal line (alpha = (1,1) on a radial profile).
        const Eigen::VectorXd d = Eigen::VectorXd::Ones(prof.center().size()).normalized();
        double scale = 0.0, diff = 0.0;
        for (int q = -40; q <= 40; ++q) {
          const Eigen::VectorXd x = prof.center() + (prof.rho1() * q / 40.0) * d;
          scale = std::max(scale, std::abs(image(x)));
        }
        for (double f : {0.5, 1.5}) {
          const Eigen::VectorXd x = ball.center() + (f * rb) * d;
          const double a = image(x), b = apply_riesz_pv(kspec, cf, x, pv).value;
          scale = std::max({scale, std::abs(a), std::abs(b)});
          diff = std::max(diff, std::abs(a - b));
        }
        out.cross_check = scale > 0.0 ? diff / scale : diff;
        out.checked = true;
      }
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });
  std::vector<double> norms;
  double worst_cross = 0.0;
  for (std::size_t i = 0; i < st.atoms.size(); ++i) {
    const auto& spec = st.atoms[i];
    const auto& r = res[i];
    const std::string id = "atom " + std::to_string(i) + " (" + spec.describe() + ")";
    if (!r.error.empty()) {
      rep.fail(id + ": " + r.error);
      rep.add_row({cell(i), cell(n), st.alpha.to_string(':'), to_string(st.family), to_string(st.kind),
                   cell(spec.center.norm()), "-", "error", "-", "-", "-", "-"});
      continue;
    }
    norms.push_back(r.split.total);
    if (r.checked) {
      worst_cross = std::max(worst_cross, r.cross_check);
      if (!(r.cross_check <= st.cross_check_tol)) rep.fail(id + ": kernel cross-check " + cell(r.cross_check));
    }
    rep.add_row({cell(i), cell(n), st.alpha.to_string(':'), to_string(st.family), to_string(st.kind),
                 cell(spec.center.norm()), cell(spec.ball().radius()), r.route, cell(r.split.total),
                 cell(r.split.near), cell(r.split.far), r.checked ? cell(r.cross_check) : std::string("-")});
  }
  if (st.include_constant) {
    const double c = constant_image_l1(order);
    norms.push_back(c);
    rep.add_row({"constant", cell(n), st.alpha.to_string(':'), to_string(st.family), "constant", "-", "-", "spectral",
                 cell(c), "-", "-", "-"});
    rep.set("constant_l1", c);
  }
  const double med = median_of(norms);
  const double sup = norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
  rep.set("count", static_cast<double>(norms.size()));
  rep.set("sup", sup);
  rep.set("median", med);
  rep.set("sup_over_median", med > 0.0 ? sup / med : 0.0);
  rep.set("max_cross_check", worst_cross);
  if (!(sup <= st.blowup_factor * med)) {
    rep.fail("sup " + cell(sup) + " exceeds " + cell(st.blowup_factor) + " x median " + cell(med));
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

SweepReport sweep_h1_counterprobe(const CounterprobeSettings& st) {
  const auto t0 = Clock::now();
  const int n = st.alpha.dim(), k = st.alpha.order();
  Eigen::VectorXd center = st.center, offset = st.offset;
  if (center.size() == 0) {
    center = Eigen::VectorXd::Zero(n);
    center(0) = 1.5;
  }
  if (offset.size() == 0) {
    offset = Eigen::VectorXd::Zero(n);
    offset(0) = 0.25;
    if (n > 1) offset(1) = 0.15;
  }
  SweepReport rep;
  rep.experiment = "h1-probe";
  rep.seed = st.seed;
  rep.param("alpha", st.alpha.to_string(':'));
  rep.param("center", vec_text(center));
  rep.param("offset", vec_text(offset));
  rep.columns = {"kind", "fraction", "r_B", "l1", "near", "far"};
  const RieszOrder order(st.alpha, Family::Old);
  std::vector<L1Split> h1(st.fractions.size()), xk(st.fractions.size());
  std::vector<std::string> errors(st.fractions.size());
  parallel_for(st.fractions.size(), [&](std::size_t i) {
    try {
      AtomSpec spec;
      spec.center = center;
      spec.k = k;
      spec.radius_fraction = st.fractions[i];
      const AdmissibleBall ball = spec.ball();
      const double rb = ball.radius();
      const BumpProfile off = BumpProfile::inside(ball, 0.5, 0.2, Eigen::VectorXd(offset * rb));
      const H1Atom a = make_h1_atom(ball, off);
      const SemigroupTransform tr(order, a.as_jet_function(off.rho2()), st.semigroup);
      h1[i] = riesz_l1_norm(tr, ball.ball(), 4.0 * rb);
      const XkAtom b = make_xk_atom(k, ball, BumpProfile::inside(ball));
      if (k % 2 == 0) {
        const QuadratureGrid& g = b.samples().grid;
        double l1 = 0.0;
        for (Eigen::Index j = 0; j < g.size(); ++j) {
          const auto x = g.nodes.col(j);
          l1 += g.weights(j) * std::abs(riesz_derivative_jet(order, b.preimage_jet(k / 2, x, k), x).value());
        }
        xk[i] = L1Split{l1, l1, 0.0};
      } else {
        const SemigroupTransform tb(order, b.as_jet_function(), st.semigroup);
        xk[i] = riesz_l1_norm(tb, ball.ball(), 4.0 * rb);
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::vector<double> inv_r, yh, yx;
  for (std::size_t i = 0; i < st.fractions.size(); ++i) {
    if (!errors[i].empty()) {
      rep.fail("fraction " + cell(st.fractions[i]) + ": " + errors[i]);
      continue;
    }
    const double rb = st.fractions[i] * m_admissibility(center.norm());
    rep.add_row({"h1", cell(st.fractions[i]), cell(rb), cell(h1[i].total), cell(h1[i].near), cell(h1[i].far)});
    rep.add_row({"xk", cell(st.fractions[i]), cell(rb), cell(xk[i].total), cell(xk[i].near), cell(xk[i].far)});
    inv_r.push_back(1.0 / rb);
    yh.push_back(h1[i].total);
    yx.push_back(xk[i].total);
  }
  if (inv_r.size() >= 2) {
    rep.set("h1_slope", loglog_slope(inv_r, yh));
    rep.set("xk_slope", loglog_slope(inv_r, yx));
    rep.set("h1_growth", yh.back() / yh.front());
    rep.set("xk_growth", yx.back() / yx.front());
    bool monotone = true;
    for (std::size_t i = 1; i < yh.size(); ++i) monotone = monotone && yh[i] >= yh[i - 1];
    rep.set("h1_monotone", monotone ? 1.0 : 0.0);
    rep.notes.push_back("H1 norm slope against 1/r_B " + cell(*rep.get("h1_slope")) + ", X^k slope " +
                        cell(*rep.get("xk_slope")) + " (reported, not asserted)");
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

}  // namespace gaussriesz

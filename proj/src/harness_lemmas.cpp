#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaussriesz/harness.hpp"
#include "gaussriesz/hermite.hpp"
#include "gaussriesz/parallel.hpp"
#include "gaussriesz/quadrature.hpp"
#include "gaussriesz/riesz_kernel.hpp"
#include "gaussriesz/spectral.hpp"

namespace gaussriesz {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

HermiteCoeffs normal_coeffs(int n, int degree, SampleRng& rng) {
  HermiteCoeffs f(n);
  for (const auto& beta : indices_up_to_degree(n, degree)) f.set(beta, rng.normal());
  return f;
}

// Normalized Hermite values and first two derivatives by differentiating the
// three-term recurrence, independent of the ladder relations.
struct HermiteDerivs {
  std::vector<double> v, d1, d2;
};

HermiteDerivs hermite_derivs(int degree, double x) {
  HermiteDerivs h;
  h.v.assign(degree + 1, 0.0);
  h.d1.assign(degree + 1, 0.0);
  h.d2.assign(degree + 1, 0.0);
  h.v[0] = 1.0;
  if (degree >= 1) {
    h.v[1] = std::numbers::sqrt2 * x;
    h.d1[1] = std::numbers::sqrt2;
  }
  for (int m = 1; m < degree; ++m) {
    const double a = std::numbers::sqrt2 / std::sqrt(m + 1.0), b = std::sqrt(m / (m + 1.0));
    h.v[m + 1] = a * x * h.v[m] - b * h.v[m - 1];
    h.d1[m + 1] = a * (h.v[m] + x * h.d1[m]) - b * h.d1[m - 1];
    h.d2[m + 1] = a * (2.0 * h.d1[m] + x * h.d2[m]) - b * h.d2[m - 1];
  }
  return h;
}

// f, grad f, Laplacian f at x with matching sums of absolute contributions.
struct PointJet {
  double f = 0.0, f_mag = 0.0, lap = 0.0, lap_mag = 0.0;
  Eigen::VectorXd grad, grad_mag;
};

PointJet point_jet(const HermiteCoeffs& c, const Eigen::VectorXd& x) {
  const int n = c.dim(), deg = std::max(c.max_degree(), 0);
  std::vector<HermiteDerivs> t;
  for (int i = 0; i < n; ++i) t.push_back(hermite_derivs(deg, x(i)));
  PointJet p;
  p.grad = Eigen::VectorXd::Zero(n);
  p.grad_mag = Eigen::VectorXd::Zero(n);
  for (const auto& [beta, cb] : c) {
    double v = cb;
    for (int i = 0; i < n; ++i) v *= t[i].v[beta[i]];
    p.f += v;
    p.f_mag += std::abs(v);
    for (int i = 0; i < n; ++i) {
      double g = cb, l = cb;
      for (int j = 0; j < n; ++j) {
        g *= j == i ? t[j].d1[beta[j]] : t[j].v[beta[j]];
        l *= j == i ? t[j].d2[beta[j]] : t[j].v[beta[j]];
      }
      p.grad(i) += g;
      p.grad_mag(i) += std::abs(g);
      p.lap += l;
      p.lap_mag += std::abs(l);
    }
  }
  return p;
}

double rel(double err, double scale) { return scale > 0.0 ? err / scale : err; }

std::vector<MultiIndex> default_oracle_alphas() {
  std::vector<MultiIndex> out;
  for (int n : {1, 2}) {
    for (const auto& a : indices_up_to_degree(n, 3)) {
      if (a.order() >= 1) out.push_back(a);
    }
  }
  return out;
}

// Normalized Hermite basis values for the given indices at each column of pts.
Eigen::MatrixXd basis_matrix(const Eigen::MatrixXd& pts, const std::vector<MultiIndex>& idx, int degree) {
  const int n = static_cast<int>(pts.rows());
  Eigen::MatrixXd out(pts.cols(), static_cast<Eigen::Index>(idx.size()));
  std::vector<double> table(static_cast<std::size_t>(n * (degree + 1)));
  for (Eigen::Index j = 0; j < pts.cols(); ++j) {
    for (int i = 0; i < n; ++i) hermite_normalized_table<double>(degree, pts(i, j), table.data() + i * (degree + 1));
    for (std::size_t b = 0; b < idx.size(); ++b) {
      double v = 1.0;
      for (int i = 0; i < n; ++i) v *= table[static_cast<std::size_t>(i * (degree + 1) + idx[b][i])];
      out(j, static_cast<Eigen::Index>(b)) = v;
    }
  }
  return out;
}

}  // namespace

SweepReport check_ladder_identities(const LadderSettings& st) {
  const auto t0 = Clock::now();
  SweepReport rep;
  rep.experiment = "ladder";
  rep.seed = st.seed;
  rep.param("truncations", cell(st.truncations));
  rep.param("max_degree", cell(st.max_degree));
  rep.param("tol", cell(st.tol));
  rep.columns = {"id", "n", "degree", "adjoint", "lower_pointwise", "raise_pointwise", "ladder_sum", "ou_pointwise",
                 "inverse_power"};
  SampleRng rng(st.seed);
  double worst = 0.0;
  for (int t = 0; t < st.truncations; ++t) {
    const int n = 1 + t % 3;
    const int degree = t % 10 == 0 ? st.max_degree : 1 + static_cast<int>(rng.uniform() * st.max_degree);
    const HermiteCoeffs f = normal_coeffs(n, degree, rng), g = normal_coeffs(n, degree, rng);
    double adj = 0.0, lp = 0.0, rp = 0.0, lsum = 0.0, oup = 0.0, inv = 0.0;
    HermiteCoeffs sum(n);
    for (int i = 0; i < n; ++i) {
      const HermiteCoeffs lf = lower(i, f), rg = raise(i, g);
      adj = std::max(adj, rel(std::abs(dot(lf, g) - dot(f, rg)), lf.norm() * g.norm() + f.norm() * rg.norm()));
      sum += raise(i, lf);
    }
    const HermiteCoeffs Lf = apply_power(ou_power(1.0), f);
    lsum = rel((sum - Lf).norm(), Lf.norm());
    for (double z : {0.5, 1.0, 2.0, 3.0}) {
      const HermiteCoeffs back = apply_power(ou_power(z), apply_power(ou_power(-z), f));
      inv = std::max(inv, rel((back - pi0(f)).norm(), f.norm()));
    }
    for (int q = 0; q < 3; ++q) {
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = rng.uniform(-1.5, 1.5);
      const PointJet p = point_jet(f, x);
      for (int i = 0; i < n; ++i) {
        const double dl = lower(i, f).evaluate(x), want_l = std::numbers::sqrt2 / 2.0 * p.grad(i);
        lp = std::max(lp, rel(std::abs(dl - want_l), std::numbers::sqrt2 / 2.0 * p.grad_mag(i)));
        const double dr = raise(i, f).evaluate(x);
        const double want_r = std::numbers::sqrt2 / 2.0 * (-p.grad(i) + 2.0 * x(i) * p.f);
        const double mag_r = std::numbers::sqrt2 / 2.0 * (p.grad_mag(i) + 2.0 * std::abs(x(i)) * p.f_mag);
        rp = std::max(rp, rel(std::abs(dr - want_r), mag_r));
      }
      const double want = -0.5 * p.lap + x.dot(p.grad);
      const double mag = 0.5 * p.lap_mag + x.cwiseAbs().dot(p.grad_mag);
      oup = std::max(oup, rel(std::abs(Lf.evaluate(x) - want), mag));
    }
    rep.add_row({cell(t), cell(n), cell(degree), cell(adj), cell(lp), cell(rp), cell(lsum), cell(oup), cell(inv)});
    const double m = std::max({adj, lp, rp, lsum, oup, inv});
    worst = std::max(worst, m);
    if (!(m <= st.tol)) {
      ++rep.violations;
      rep.fail("truncation " + std::to_string(t) + ": identity error " + cell(m));
    }
  }
  rep.set("max_error", worst);
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

SweepReport check_spectral_kernel_oracle(const OracleSettings& st) {
  const auto t0 = Clock::now();
  SweepReport rep;
  rep.experiment = "spectral-kernel";
  rep.seed = st.seed;
  rep.param("inputs", cell(st.inputs));
  rep.param("points", cell(st.points));
  rep.param("input_degree", cell(st.input_degree));
  rep.param("tol", cell(st.tol));
  rep.columns = {"n", "alpha", "family", "input", "c", "rel_error"};
  const auto alphas = st.alphas.empty() ? default_oracle_alphas() : st.alphas;
  SampleRng rng(st.seed);
  double worst = 0.0;
  for (const auto& alpha : alphas) {
    const int n = alpha.dim();
    const auto idx = indices_up_to_degree(n, st.input_degree);
    std::vector<HermiteCoeffs> inputs;
    Eigen::MatrixXd C(static_cast<Eigen::Index>(idx.size()), st.inputs);
    for (int q = 0; q < st.inputs; ++q) {
      inputs.push_back(normal_coeffs(n, st.input_degree, rng));
      for (std::size_t b = 0; b < idx.size(); ++b) C(static_cast<Eigen::Index>(b), q) = inputs.back()(idx[b]);
    }
    std::vector<Eigen::VectorXd> pts;
    for (int p = 0; p < st.points; ++p) pts.push_back(rng.in_ball(Eigen::VectorXd::Zero(n), st.point_radius));
    for (Family fam : st.families) {
      const RieszOrder order(alpha, fam);
      KernelSpec spec{alpha, kernel_family(fam), 1.0};
      if (auto rec = find_calibration(st.calibration, alpha, fam); rec && !rec->flagged) {
        spec.normalization = rec->c;
      } else {
        CalibrationSettings cs;
        cs.pv = st.pv;
        const auto fresh = calibrate_kernel(alpha, fam, cs);
        if (fresh.flagged) rep.fail(alpha.to_string(':') + " " + to_string(fam) + ": calibration flagged");
        spec.normalization = fresh.c;
      }
      Eigen::MatrixXd K(st.points, st.inputs), S(st.points, st.inputs);
      const Ball support{Eigen::VectorXd::Zero(n), kMaskOuter};
      parallel_for(pts.size(), [&](std::size_t p) {
        const PVStencil sten = build_pv_stencil(spec, support, pts[p], st.pv);
        Eigen::VectorXd mask(sten.nodes.cols());
        for (Eigen::Index j = 0; j < mask.size(); ++j) mask(j) = calibration_mask(sten.nodes.col(j));
        const Eigen::MatrixXd vals = mask.asDiagonal() * (basis_matrix(sten.nodes, idx, st.input_degree) * C);
        const Eigen::RowVectorXd fx =
            calibration_mask(pts[p]) * basis_matrix(pts[p], idx, st.input_degree) * C;
        for (int q = 0; q < st.inputs; ++q) {
          K(static_cast<Eigen::Index>(p), q) = apply_stencil(sten, vals.col(q), fx(q), st.pv).value;
          S(static_cast<Eigen::Index>(p), q) = riesz_apply(order, inputs[static_cast<std::size_t>(q)]).evaluate(pts[p]);
        }
      });
      for (int q = 0; q < st.inputs; ++q) {
        const double scale = S.col(q).cwiseAbs().maxCoeff();
        const double err = rel((K.col(q) - S.col(q)).cwiseAbs().maxCoeff(), scale);
        worst = std::max(worst, err);
        rep.add_row({cell(n), alpha.to_string(':'), to_string(fam), cell(q), cell(spec.normalization), cell(err)});
        if (!(err < st.tol)) {
          rep.fail(alpha.to_string(':') + " " + to_string(fam) + " input " + std::to_string(q) + ": relative error " +
                   cell(err));
        }
      }
    }
  }
  rep.set("max_rel_error", worst);
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

SweepReport check_geometry_lemma(const GeometrySettings& st) {
  const auto t0 = Clock::now();
  SweepReport rep;
  rep.experiment = "geometry";
  rep.seed = st.seed;
  rep.param("samples", cell(st.samples));
  rep.param("max_center", cell(st.max_center));
  rep.columns = {"regime", "n", "id", "c_norm", "r_B", "y_norm", "r_By", "r", "dist_over_rB", "margin"};
  SampleRng rng(st.seed);
  auto record = [&](const std::string& regime, int n, std::size_t id, const Eigen::VectorXd& c, double rb,
                    const Eigen::VectorXd& y, double r, const Eigen::VectorXd& x, double& min_margin,
                    std::size_t& viol) {
    const double lhs = 4.0 * (x - r * y).norm(), rhs = (x - c).norm();
    const double rby = y.norm() > 0.0 ? rb / (2.0 * y.norm()) : INFINITY;
    const double margin = lhs / rhs;
    min_margin = std::min(min_margin, margin);
    if (lhs < rhs) {
      ++viol;
      if (rep.failures.size() < 20) rep.fail(regime + " n=" + std::to_string(n) + " sample " + std::to_string(id));
    }
    rep.add_row({regime, cell(n), cell(id), cell(c.norm()), cell(rb), cell(y.norm()), cell(rby), cell(r),
                 cell(rhs / rb), cell(margin)});
  };
  auto outside_point = [&](const Eigen::VectorXd& c, double rb, std::size_t id) {
    const double rho = id % 37 == 0 ? 2.0 : 2.0 + rng.log_uniform(1e-6, 30.0);
    return Eigen::VectorXd(c + rho * rb * rng.unit_vector(static_cast<int>(c.size())));
  };
  for (int n : st.dims) {
    for (const std::string regime : {"i", "ii"}) {
      double min_margin = INFINITY;
      std::size_t viol = 0;
      if (regime == "i") {
        const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd e1 = zero;
        e1(0) = 1.0;
        record(regime, n, 0, zero, 0.5, zero, 1.0, e1, min_margin, viol);
      }
      for (std::size_t id = 1; id <= st.samples; ++id) {
        Eigen::VectorXd c, y;
        double rb = 0.0;
        for (bool ok = false; !ok;) {
          if (regime == "i") {
            rb = rng.log_uniform(1e-3, 1.0);
            c = rng.in_ball(Eigen::VectorXd::Zero(n), 1.5 * rb);
            if (rb > m_admissibility(c.norm())) continue;
            for (int a = 0; a < 64 && !ok; ++a) {
              y = rng.in_ball(Eigen::VectorXd::Zero(n), 0.5 * rb);
              ok = (y - c).norm() < rb;
            }
          } else {
            c = rng.uniform(0.0, st.max_center) * rng.unit_vector(n);
            rb = m_admissibility(c.norm()) * rng.log_uniform(1e-3, 1.0);
            for (int a = 0; a < 64 && !ok; ++a) {
              y = rng.in_ball(c, rb);
              ok = y.norm() > 0.5 * rb;
            }
          }
        }
        double r = 0.0;
        if (regime == "i") {
          r = id % 50 == 0 ? 1.0 : id % 50 == 25 ? 0.0 : rng.uniform();
        } else {
          const double rby = rb / (2.0 * y.norm());
          r = id % 50 == 0 ? 1.0 - rby : id % 50 == 25 ? 1.0 : 1.0 - rby * rng.uniform();
        }
        record(regime, n, id, c, rb, y, r, outside_point(c, rb, id), min_margin, viol);
      }
      rep.violations += viol;
      const std::string key = "n" + std::to_string(n) + "_" + regime;
      rep.set(key + "_violations", static_cast<double>(viol));
      rep.set(key + "_min_margin", min_margin);
    }
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

double phi_delta(int n, double delta, double s) { return std::pow(1.0 + s, n - 2) * std::exp(-delta * s * s); }

double phi_tail_closed_form(int n, double delta, double s) {
  return std::pow(std::numbers::pi / delta, 0.5 * n) * gamma_q(0.5 * n, 4.0 * delta * s * s);
}

double phi_tail_quadrature(int n, double delta, double s) {
  if (!(delta > 0.0) || !(s >= 0.0)) throw std::invalid_argument("phi tail needs delta > 0, s >= 0");
  // rho = 2s + t/sqrt(delta): e^{-delta rho^2} = e^{-4 delta s^2} e^{-4 s sqrt(delta) t - t^2}
  const double sd = std::sqrt(delta), rate = 4.0 * s * sd;
  std::vector<double> br{0.0};
  for (double h = std::min(0.25, 1.0 / (1.0 + rate)); h < 12.0; h *= 2.0) br.push_back(h);
  br.push_back(12.0);
  const auto rule = composite_legendre(br, 12);
  double acc = 0.0;
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double t = rule.nodes[j];
    acc += rule.weights[j] * std::pow(2.0 * s + t / sd, n - 1) * std::exp(-rate * t - t * t);
  }
  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  return sphere * std::exp(-4.0 * delta * s * s) * acc / sd;
}

SweepReport check_phi_bound(const PhiSettings& st) {
  const auto t0 = Clock::now();
  SweepReport rep;
  rep.experiment = "phi-bound";
  rep.seed = st.seed;
  rep.param("delta", cell(st.delta));
  rep.param("balls", cell(st.balls));
  rep.param("r_points", cell(st.r_points));
  rep.columns = {"n", "ball", "r_B", "c_norm", "grid", "r", "s", "lhs", "closed_form", "phi", "C1_phi", "exp_envelope"};
  SampleRng rng(st.seed);
  struct BallRec {
    double rb;
    Eigen::VectorXd c;
  };
  const double delta = st.delta;
  for (int n : st.dims) {
    std::vector<BallRec> balls;
    for (int b = 0; b < st.balls; ++b) {
      const double rb = std::pow(st.min_radius, static_cast<double>(b) / std::max(st.balls - 1, 1));
      const double cmax = rb < 1.0 ? 1.0 / rb : 1.0;
      balls.push_back({rb, rng.uniform(0.0, cmax) * rng.unit_vector(n)});
    }
    std::vector<double> fit_r, check_r;
    for (int j = 0; j < st.r_points; ++j) fit_r.push_back(std::sin(0.5 * std::numbers::pi * (j + 0.5) / st.r_points));
    for (int j = 0; j + 1 < st.r_points; ++j) check_r.push_back(std::sin(0.5 * std::numbers::pi * (j + 1.0) / st.r_points));
    auto lhs_of = [&](double rb, double r, double& closed) {
      const double s = rb / std::sqrt((1.0 - r) * (1.0 + r));
      const double q = phi_tail_quadrature(n, delta, s);
      closed = phi_tail_closed_form(n, delta, s);
      if (std::abs(q - closed) > st.quadrature_tol * std::max(closed, 1e-300)) {
        rep.fail("n=" + std::to_string(n) + " r_B=" + cell(rb) + " r=" + cell(r) + ": tail quadrature off by " +
                 cell(std::abs(q - closed) / closed) + ", refine the grid");
      }
      return q;
    };
    double C1 = 0.0;
    for (const auto& b : balls) {
      for (double r : fit_r) {
        double closed = 0.0;
        const double s = b.rb / std::sqrt((1.0 - r) * (1.0 + r));
        const double q = lhs_of(b.rb, r, closed), ph = phi_delta(n, delta, s);
        if (ph > 0.0) C1 = std::max(C1, q / ph);
      }
    }
    double C2 = delta, cn = 1.0;
    if (n >= 3) {
      C2 = 0.5 * delta;
      const double ss = 0.5 * (-1.0 + std::sqrt(1.0 + 2.0 * (n - 2) / (delta - C2)));
      cn = std::pow(1.0 + ss, n - 2) * std::exp(-(delta - C2) * ss * ss);
    }
    std::size_t viol = 0;
    const std::string key = "n" + std::to_string(n);
    for (std::size_t bi = 0; bi < balls.size(); ++bi) {
      const auto& b = balls[bi];
      for (const auto& [grid, rs] : {std::pair{"fit", &fit_r}, std::pair{"check", &check_r}}) {
        for (double r : *rs) {
          double closed = 0.0;
          const double s = b.rb / std::sqrt((1.0 - r) * (1.0 + r));
          const double q = lhs_of(b.rb, r, closed), ph = phi_delta(n, delta, s);
          const double env = C1 * ph, ex = C1 * cn * std::exp(-C2 * s * s);
          if (q > env || env > ex) {
            ++viol;
            if (rep.failures.size() < 20) rep.fail(key + " ball " + std::to_string(bi) + " r=" + cell(r));
          }
          rep.add_row({cell(n), cell(bi), cell(b.rb), cell(b.c.norm()), grid, cell(r), cell(s), cell(q), cell(closed),
                       cell(ph), cell(env), cell(ex)});
        }
      }
    }
    rep.violations += viol;
    rep.set(key + "_C1", C1);
    rep.set(key + "_C2", C2);
    rep.set(key + "_cn", cn);
    rep.set(key + "_violations", static_cast<double>(viol));
    double lo = INFINITY, hi = 0.0;
    for (double rb : {1.0, 0.5, 0.1}) {
      double c1 = 0.0;
      for (double r : fit_r) {
        const double s = rb / std::sqrt((1.0 - r) * (1.0 + r));
        const double ph = phi_delta(n, delta, s);
        if (ph > 0.0) c1 = std::max(c1, phi_tail_closed_form(n, delta, s) / ph);
      }
      rep.set(key + "_C1_rB_" + cell(rb), c1);
      lo = std::min(lo, c1);
      hi = std::max(hi, c1);
    }
    rep.set(key + "_C1_spread", hi / lo);
    rep.notes.push_back(key + ": C1 refitted per r_B in {1, 0.5, 0.1} varies by a factor " + cell(hi / lo) +
                        " (reported, not asserted)");
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

double halfpower_far_norm(int k, const AdmissibleBall& ball, const BumpProfile& f) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("half-power order must be odd");
  const int n = ball.dim();
  if (n < 1 || n > 2) throw std::invalid_argument("half-power norm supports n = 1 or 2");
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  a[0] = k;
  const KernelSpec spec{MultiIndex(a), KernelFamily::HalfPowerDerivative, 1.0};
  const QuadratureGrid yg = profile_grid(f);
  Eigen::VectorXd fw(yg.size());
  for (Eigen::Index j = 0; j < yg.size(); ++j) fw(j) = yg.weights(j) / gamma_density(yg.nodes.col(j)) * f(yg.nodes.col(j));
  const double r4 = 4.0 * ball.radius(), top = ball.center().norm() + 7.0;
  std::vector<double> br{r4};
  while (br.back() < top) br.push_back(std::min(top, 1.5 * br.back() + 0.05));
  const auto radial = composite_legendre(br, 10);
  auto value_at = [&](const Eigen::VectorXd& x) {
    double v = 0.0;
    for (Eigen::Index j = 0; j < yg.size(); ++j) {
      if (fw(j) != 0.0) v += fw(j) * kernel_halfpower_derivative(spec, x, yg.nodes.col(j));
    }
    return v;
  };
  double acc = 0.0;
  if (n == 1) {
    for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
      for (double sgn : {-1.0, 1.0}) {
        Eigen::VectorXd x(1);
        x(0) = ball.center()(0) + sgn * radial.nodes[i];
        acc += radial.weights[i] * gamma_density(x) * std::abs(value_at(x));
      }
    }
  } else {
    const int m = 64;
    std::vector<double> terms(radial.nodes.size() * m);
    parallel_for(terms.size(), [&](std::size_t q) {
      const std::size_t i = q / m;
      const double th = 2.0 * std::numbers::pi * static_cast<double>(q % m) / m, rho = radial.nodes[i];
      Eigen::VectorXd x = ball.center();
      x(0) += rho * std::cos(th);
      x(1) += rho * std::sin(th);
      terms[q] = radial.weights[i] * rho * (2.0 * std::numbers::pi / m) * gamma_density(x) * std::abs(value_at(x));
    });
    for (double t : terms) acc += t;
  }
  return acc;
}

SweepReport check_halfpower_scaling(const HalfPowerSettings& st) {
  const auto t0 = Clock::now();
  SweepReport rep;
  rep.experiment = "halfpower";
  rep.seed = st.seed;
  rep.param("dim", cell(st.dim));
  rep.param("center", cell(st.center));
  rep.columns = {"k", "r_B", "lhs", "f_l1", "ratio"};
  for (int k : st.orders) {
    std::vector<double> lx, ly;
    for (double rb : st.radii) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(st.dim);
      c(0) = st.center;
      const AdmissibleBall B(c, rb);
      const BumpProfile f = BumpProfile::inside(B);
      const QuadratureGrid g = profile_grid(f);
      double l1 = 0.0;
      for (Eigen::Index j = 0; j < g.size(); ++j) l1 += g.weights(j) * std::abs(f(g.nodes.col(j)));
      const double lhs = halfpower_far_norm(k, B, f);
      rep.add_row({cell(k), cell(rb), cell(lhs), cell(l1), cell(lhs / l1)});
      lx.push_back(std::log(rb));
      ly.push_back(std::log(lhs / l1));
    }
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx), icpt = (sy - slope * sx) / m;
    double res = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) res += std::pow(ly[i] - icpt - slope * lx[i], 2);
    const std::string key = "k" + std::to_string(k);
    rep.set(key + "_slope", slope);
    rep.set(key + "_intercept", icpt);
    rep.set(key + "_rms_residual", std::sqrt(res / m));
    const std::size_t last = lx.size() - 1;
    if (last >= 1) rep.set(key + "_tail_slope", (ly[last] - ly[last - 1]) / (lx[last] - lx[last - 1]));
    double scaled = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) scaled = std::max(scaled, std::exp(ly[i] + 2.0 * k * lx[i]));
    rep.set(key + "_max_ratio_times_rB_2k", scaled);
    const double lo = -2.0 * k - st.slope_below, hi = -2.0 * k + st.slope_above;
    if (!(slope >= lo && slope <= hi)) rep.fail(key + ": slope " + cell(slope) + " outside [" + cell(lo) + ", " + cell(hi) + "]");
  }
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

namespace {

// Integral of F over {u : |u - w| >= rho} inside the box |u_i| <= U.
template <typename F>
double complement_integral(const Eigen::VectorXd& w, double rho, double U, const std::vector<double>& extra, F&& f) {
  const int n = static_cast<int>(w.size());
  auto segment_breaks = [&](double a, double b, std::initializer_list<double> graded) {
    std::vector<double> br;
    if (!(b > a)) return br;
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / 0.5)));
    for (int i = 0; i <= panels; ++i) br.push_back(a + (b - a) * i / panels);
    for (double e : extra) {
      if (e > a && e < b) br.push_back(e);
    }
    for (double e : graded) {
      for (int m = 1; m <= 6; ++m) {
        const double d = 0.5 * std::ldexp(1.0, -m);
        for (double p : {e - d, e + d}) {
          if (p > a && p < b) br.push_back(p);
        }
      }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
  };
  auto line = [&](double a, double b, std::initializer_list<double> graded, auto&& g) {
    const auto br = segment_breaks(a, b, graded);
    if (br.size() < 2) return 0.0;
    const auto rule = composite_legendre(br, 8);
    double acc = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) acc += rule.weights[j] * g(rule.nodes[j]);
    return acc;
  };
  if (n == 1) {
    auto g = [&](double u) {
      Eigen::VectorXd v(1);
      v(0) = u;
      return f(v);
    };
    return line(-U, std::min(U, w(0) - rho), {}, g) + line(std::max(-U, w(0) + rho), U, {}, g);
  }
  auto outer = [&](double u1) {
    auto g = [&](double u2) {
      Eigen::VectorXd v(2);
      v << u1, u2;
      return f(v);
    };
    const double d = u1 - w(0);
    if (std::abs(d) >= rho) return line(-U, U, {}, g);
    const double h = std::sqrt((rho - d) * (rho + d));
    return line(-U, std::min(U, w(1) - h), {}, g) + line(std::max(-U, w(1) + h), U, {}, g);
  };
  return line(-U, U, {w(0) - rho, w(0) + rho}, outer);
}

}  // namespace

NuSample nu_s_sample(const MultiIndex& alpha, const AdmissibleBall& ball, const Eigen::VectorXd& y) {
  const int n = alpha.dim(), k = alpha.order();
  if (ball.dim() != n || y.size() != n) throw std::invalid_argument("nu_s sample dimension mismatch");
  if (k < 1) throw std::invalid_argument("nu_s needs |alpha| >= 1");
  const double cn = analytic_normalization(n, k), rb = ball.radius();
  const double rby = ball.r_By(y);
  std::vector<double> roots;
  if (n == 1) {
    const auto gh = gauss_hermite_rule<double>(alpha[0] + 1);
    for (Eigen::Index i = 0; i < gh.nodes.size(); ++i) roots.push_back(gh.nodes(i));
  }
  auto grad_mag = [&](const Eigen::VectorXd& u) {
    double H = 1.0, s2 = 0.0;
    std::vector<double> h(static_cast<std::size_t>(n)), hm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      h[static_cast<std::size_t>(i)] = hermite_eval_1d<double>(alpha[i], u(i));
      hm[static_cast<std::size_t>(i)] = alpha[i] > 0 ? hermite_eval_1d<double>(alpha[i] - 1, u(i)) : 0.0;
      H *= h[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i < n; ++i) {
      double low = alpha[i] * hm[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        if (j != i) low *= h[static_cast<std::size_t>(j)];
      }
      const double gi = low - u(i) * H;
      s2 += gi * gi;
    }
    return std::sqrt(s2) * std::exp(-u.squaredNorm());
  };
  auto pieces = [&](double r, double& s_val, double& i_val) {
    const double sig = std::sqrt((1.0 - r) * (1.0 + r));
    const Eigen::VectorXd w = (ball.center() - r * y) / sig;
    const double rho = 2.0 * rb / sig, lam = lambda_alpha(k, r);
    const double A = complement_integral(w, rho, 7.0, roots, grad_mag);
    const double Bv = complement_integral(w, rho, 10.0, {}, [](const Eigen::VectorXd& v) {
      return std::exp(-0.5 * v.squaredNorm());
    });
    s_val = cn * 2.0 * r * lam * A / (sig * sig * sig);
    i_val = lam * Bv / (sig * sig * sig);
  };
  auto integrate_low = [&](double a, double b, double& s_out, double& i_out) {
    const auto rule = composite_legendre({a, a + (b - a) / 32, a + (b - a) / 8, a + (b - a) / 4, a + (b - a) / 2, b}, 10);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      double s = 0.0, i = 0.0;
      pieces(rule.nodes[j], s, i);
      s_out += rule.weights[j] * s;
      i_out += rule.weights[j] * i;
    }
  };
  // r = 1 - e^{-v}, dr = e^{-v} dv
  auto integrate_high = [&](double a, double b, double& s_out, double& i_out) {
    const double va = -std::log1p(-a), vb = b >= 1.0 ? 40.0 : -std::log1p(-b);
    if (!(vb > va)) return;
    std::vector<double> br{va};
    while (br.back() < vb) br.push_back(std::min(vb, br.back() + 1.0));
    int zero_panels = 0;
    for (std::size_t p = 0; p + 1 < br.size() && zero_panels < 2; ++p) {
      const auto rule = composite_legendre({br[p], br[p + 1]}, 8);
      double ps = 0.0, pi = 0.0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const double v = rule.nodes[j], r = -std::expm1(-v);
        double s = 0.0, i = 0.0;
        pieces(r, s, i);
        ps += rule.weights[j] * std::exp(-v) * s;
        pi += rule.weights[j] * std::exp(-v) * i;
      }
      s_out += ps;
      i_out += pi;
      zero_panels = ps == 0.0 && pi == 0.0 ? zero_panels + 1 : 0;
    }
  };
  NuSample out;
  integrate_low(0.0, 0.5, out.s_parts[0], out.i_parts[0]);
  if (rby < 0.5) {
    integrate_high(0.5, 1.0 - rby, out.s_parts[1], out.i_parts[1]);
    integrate_high(1.0 - rby, 1.0, out.s_parts[2], out.i_parts[2]);
  } else {
    integrate_high(0.5, 1.0, out.s_parts[2], out.i_parts[2]);
  }
  return out;
}

SweepReport estimate_nu_s(const NuSettings& st) {
  const auto t0 = Clock::now();
  SweepReport rep;
  rep.experiment = "nu-s";
  rep.seed = st.seed;
  rep.param("alpha", st.alpha.to_string(':'));
  rep.param("samples", cell(st.samples));
  rep.param("margin", cell(st.margin));
  rep.columns = {"id", "c_norm", "r_B", "y_norm", "r_By", "s_I1", "s_I2", "s_I3", "rB_s", "I1", "I2", "I3", "rB_I",
                 "split"};
  const int n = st.alpha.dim();
  SampleRng rng(st.seed);
  struct Draw {
    Eigen::VectorXd c, y;
    double rb;
  };
  std::vector<Draw> draws;
  for (int i = 0; i < st.samples; ++i) {
    Eigen::VectorXd c = rng.uniform(0.0, st.max_center) * rng.unit_vector(n);
    const double rb = m_admissibility(c.norm()) * rng.log_uniform(st.min_fraction, 1.0);
    Eigen::VectorXd y = i % 10 == 0 ? c : rng.in_ball(c, rb);
    draws.push_back({std::move(c), std::move(y), rb});
  }
  std::vector<NuSample> res(draws.size());
  parallel_for(draws.size(), [&](std::size_t i) {
    res[i] = nu_s_sample(st.alpha, AdmissibleBall(draws[i].c, draws[i].rb), draws[i].y);
  });
  std::vector<double> radii;
  for (const auto& d : draws) radii.push_back(d.rb);
  std::vector<double> sorted = radii;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];
  double fit_s = 0.0, fit_i = 0.0, max_s = 0.0, max_i = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double ps = draws[i].rb * res[i].s_total(), pi = draws[i].rb * res[i].i_total();
    if (draws[i].rb >= median) {
      fit_s = std::max(fit_s, ps);
      fit_i = std::max(fit_i, pi);
    }
    max_s = std::max(max_s, ps);
    max_i = std::max(max_i, pi);
  }
  const double bound_s = st.margin * fit_s, bound_i = st.margin * fit_i;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const auto& d = draws[i];
    const auto& s = res[i];
    const double ps = d.rb * s.s_total(), pi = d.rb * s.i_total();
    const bool holdout = d.rb < median;
    if (holdout && (ps > bound_s || pi > bound_i)) {
      ++rep.violations;
      rep.fail("sample " + std::to_string(i) + ": r_B s = " + cell(ps) + ", r_B I = " + cell(pi));
    }
    const double rby = d.y.norm() > 0.0 ? d.rb / (2.0 * d.y.norm()) : INFINITY;
    rep.add_row({cell(i), cell(d.c.norm()), cell(d.rb), cell(d.y.norm()), cell(rby), cell(s.s_parts[0]),
                 cell(s.s_parts[1]), cell(s.s_parts[2]), cell(ps), cell(s.i_parts[0]), cell(s.i_parts[1]),
                 cell(s.i_parts[2]), cell(pi), holdout ? "holdout" : "fit"});
  }
  rep.set("median_r_B", median);
  rep.set("fitted_nu_s", bound_s);
  rep.set("fitted_I_bound", bound_i);
  rep.set("max_rB_s", max_s);
  rep.set("max_rB_I", max_i);
  rep.runtime_seconds = seconds_since(t0);
  return rep;
}

}  // namespace gaussriesz

#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussriesz/calibration.hpp"
#include "gaussriesz/hermite.hpp"
#include "gaussriesz/jets.hpp"
#include "gaussriesz/profiles.hpp"
#include "gaussriesz/quadrature.hpp"
#include "gaussriesz/riesz_kernel.hpp"

using namespace gaussriesz;
using doctest::Approx;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

KernelSpec raw(MultiIndex a, KernelFamily f) { return KernelSpec{std::move(a), f, 1.0}; }

Eigen::VectorXd uniform_point(int n, double lim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-lim, lim);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = U(rng);
  return x;
}

}  // namespace

TEST_CASE("kernel values against arbitrary-precision quadrature") {
  // reference r-integrals (normalization 1) from 40-digit adaptive quadrature
  CHECK(kernel_old(raw(MultiIndex{1}, KernelFamily::Old), vec({1}), vec({3})) ==
        Approx(0.0011029271646847293).epsilon(1e-10));
  CHECK(kernel_new(raw(MultiIndex{2}, KernelFamily::New), vec({0.5}), vec({-0.7})) ==
        Approx(0.5710825147400275).epsilon(1e-10));
  CHECK(kernel_halfpower_derivative(raw(MultiIndex{3}, KernelFamily::HalfPowerDerivative), vec({1.2}),
                                    vec({0.4})) == Approx(-172.96554943702289).epsilon(1e-10));
  CHECK(kernel_halfpower_derivative(raw(MultiIndex{1}, KernelFamily::HalfPowerDerivative), vec({1.2}),
                                    vec({0.4})) == Approx(0.79393352479394739).epsilon(1e-10));
}

TEST_CASE("new kernel in log space at a large prefactor") {
  const double v = kernel_new(raw(MultiIndex{1, 0}, KernelFamily::New), vec({4, 0}), vec({0, 0}));
  CHECK(std::isfinite(v));
  CHECK(v == Approx(1.2527474535691549).epsilon(1e-10));
  const double far = kernel_new(raw(MultiIndex{1, 0}, KernelFamily::New), vec({25, 0}), vec({0, 0.5}));
  CHECK(std::isfinite(far));
}

TEST_CASE("kernel parity") {
  const auto o = raw(MultiIndex{1}, KernelFamily::Old);
  const auto nw = raw(MultiIndex{1}, KernelFamily::New);
  for (double y : {0.3, 1.1, 2.7}) {
    CHECK(kernel_old(o, vec({0}), vec({y})) == Approx(-kernel_old(o, vec({0}), vec({-y}))).epsilon(1e-13));
    CHECK(kernel_new(nw, vec({y}), vec({0})) == Approx(-kernel_new(nw, vec({-y}), vec({0}))).epsilon(1e-13));
  }
}

TEST_CASE("kernel preconditions") {
  const auto o = raw(MultiIndex{1, 1}, KernelFamily::Old);
  CHECK_THROWS_AS(kernel_old(o, vec({0.2, 0.1}), vec({0.2, 0.1})), std::domain_error);
  CHECK_THROWS_AS(kernel_new(o, vec({0.2, 0.1}), vec({0.5, 0.1})), std::invalid_argument);
  CHECK_THROWS_AS(kernel_old(o, vec({0.2}), vec({0.5})), std::invalid_argument);
  CHECK_THROWS_AS(raw(MultiIndex{2}, KernelFamily::HalfPowerDerivative).validate(), std::invalid_argument);
  CHECK_THROWS_AS(raw(MultiIndex{0}, KernelFamily::Old).validate(), std::invalid_argument);
  PVConfig bad;
  bad.eps_inner = bad.eps_outer;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  PVConfig tight;
  tight.eps_inner = 1e-9;
  CHECK_THROWS_AS(tight.validate(), std::invalid_argument);
}

TEST_CASE("r-integrand near r = 0 is integrable") {
  // stretching the lower piece far past its truncation leaves values unchanged
  KernelQuadrature longer;
  longer.t_max = 200.0;
  for (int k = 1; k <= 3; ++k) {
    for (auto fam : {KernelFamily::Old, KernelFamily::New}) {
      const auto spec = raw(MultiIndex{k}, fam);
      const double a = kernel_value(spec, vec({0.4}), vec({-1.3}));
      const double b = kernel_value(spec, vec({0.4}), vec({-1.3}), longer);
      CHECK(std::isfinite(b));
      CHECK(std::abs(a - b) <= 1e-13 * std::abs(a));
    }
  }
  for (double r : {1e-300, 1e-30, 1e-3}) {
    for (int k = 1; k <= 3; ++k) CHECK(std::isfinite(lambda_alpha(k, r)));
  }
  CHECK(lambda_alpha(2, 0.37) == 1.0);
}

TEST_CASE("panel doubling changes kernel values by less than 1e-8") {
  std::mt19937_64 rng(11);
  KernelQuadrature fine;
  fine.refinement = 1;
  const std::vector<MultiIndex> alphas{MultiIndex{1},    MultiIndex{2},    MultiIndex{3},   MultiIndex{1, 0},
                                       MultiIndex{1, 1}, MultiIndex{2, 1}, MultiIndex{0, 3}};
  int checked = 0;
  for (const auto& a : alphas) {
    for (auto fam : {KernelFamily::Old, KernelFamily::New, KernelFamily::HalfPowerDerivative}) {
      if (fam == KernelFamily::HalfPowerDerivative && a.order() % 2 == 0) continue;
      const auto spec = raw(a, fam);
      for (int trial = 0; trial < 12; ++trial) {
        const Eigen::VectorXd x = uniform_point(a.dim(), 2.0, rng), y = uniform_point(a.dim(), 2.0, rng);
        if ((x - y).norm() < 0.1) continue;
        const double v0 = kernel_value(spec, x, y), v1 = kernel_value(spec, x, y, fine);
        CHECK(std::abs(v0 - v1) <= 1e-8 * std::max(std::abs(v1), 1e-6));
        ++checked;
      }
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("s-substitution Jacobian") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.5, 1.0), Ul(0.01, 2.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r = U(rng), l = Ul(rng);
    const double sig = std::sqrt((1 - r) * (1 + r));
    const auto sub = s_substitution(l, l / sig);
    CHECK(sub.r == Approx(r).epsilon(1e-12));
    // ds / l = r dr / (1 - r^2)^{3/2}
    CHECK(1.0 / (l * sub.dr_ds) == Approx(r / (sig * sig * sig)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(s_substitution(1.0, 0.5), std::domain_error);
}

TEST_CASE("exponent identity") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> Ur(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd x = uniform_point(3, 4.0, rng), y = uniform_point(3, 4.0, rng);
    const double r = Ur(rng);
    const double lhs = -(r * x - y).squaredNorm();
    const double rhs = -(x - r * y).squaredNorm() + (1 - r * r) * (x.squaredNorm() - y.squaredNorm());
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("chain rule for the Mehler exponential through Taylor jets") {
  // partial_x^alpha e^{-|rx-y|^2/s^2} = (-r/s)^k H_alpha((rx-y)/s) e^{-|rx-y|^2/s^2}
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> Ur(0.05, 0.95);
  const std::vector<MultiIndex> alphas{MultiIndex{1}, MultiIndex{3}, MultiIndex{1, 1}, MultiIndex{2, 1},
                                       MultiIndex{0, 2}, MultiIndex{1, 1, 1}};
  for (const auto& a : alphas) {
    const int n = a.dim(), k = a.order();
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::VectorXd x = uniform_point(n, 1.5, rng), y = uniform_point(n, 1.5, rng);
      const double r = Ur(rng), s = std::sqrt(1 - r * r);
      const auto X = coordinate_jets(x, k);
      Jet E(n, k);
      for (int i = 0; i < n; ++i) {
        Jet w = X[static_cast<std::size_t>(i)] * (r / s);
        w += -y(i) / s;
        E -= w * w;
      }
      const double jet_value = exp(E).derivative(a);
      const Eigen::VectorXd w = (r * x - y) / s;
      const double closed = std::pow(-r / s, k) * hermite_eval(a, w) * std::exp(-w.squaredNorm());
      CHECK(jet_value == Approx(closed).epsilon(1e-11).scale(1e-12));
    }
  }
}

TEST_CASE("Hermite growth envelope for odd order") {
  // |H_3(u)| <= C (|u| + |u|^3), C fitted on a coarse grid and checked on a fine one
  auto ratio = [](double u) { return std::abs(hermite_eval_1d(3, u)) / (std::abs(u) + std::pow(std::abs(u), 3)); };
  double C = 0.0;
  for (int i = 1; i <= 100; ++i) C = std::max(C, ratio(10.0 * i / 100.0));
  C *= 1.05;
  int violations = 0;
  for (int i = -100000; i <= 100000; ++i) {
    if (i == 0) continue;
    if (ratio(10.0 * i / 100000.0) > C) ++violations;
  }
  CHECK(violations == 0);
  CHECK(C == Approx(12.4).epsilon(0.02));
}

TEST_CASE("gradient of F_alpha") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> Ur(0.05, 0.95);
  const std::vector<MultiIndex> alphas{MultiIndex{1}, MultiIndex{2}, MultiIndex{3}, MultiIndex{1, 0},
                                       MultiIndex{1, 1}, MultiIndex{2, 1}, MultiIndex{0, 3}};
  for (int trial = 0; trial < 100; ++trial) {
    const auto& a = alphas[static_cast<std::size_t>(trial) % alphas.size()];
    const int n = a.dim();
    const Eigen::VectorXd x = uniform_point(n, 1.5, rng), y = uniform_point(n, 1.5, rng);
    const double r = Ur(rng);
    const auto ev = F_alpha(a, x, y, r);
    const double h = 1e-5;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd yp = y, ym = y;
      yp(i) += h;
      ym(i) -= h;
      const double fd = (F_alpha(a, x, yp, r).value - F_alpha(a, x, ym, r).value) / (2 * h);
      CHECK(std::abs(fd - ev.grad_y(i)) <= 1e-6 * std::max(ev.grad_y.cwiseAbs().maxCoeff(), 1e-3));
    }
  }
  // alpha = (1) at x = r y: the lowered term is H_0 = 1 and the second term vanishes
  const double r = 0.6, s = 0.8;
  const auto g = grad_y_F(MultiIndex{1}, vec({0.6 * 1.3}), vec({1.3}), r);
  CHECK(g(0) == Approx(-2.0 * r / s).epsilon(1e-14));
}

TEST_CASE("fitted gradient bound holds on random samples") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> Ur(1e-3, 1.0 - 1e-6);
  for (const auto& a : {MultiIndex{1}, MultiIndex{3}, MultiIndex{1, 1}, MultiIndex{2, 1}}) {
    const double C = gradient_bound_constant(a);
    int violations = 0;
    for (int trial = 0; trial < 10000; ++trial) {
      const Eigen::VectorXd x = uniform_point(a.dim(), 3.0, rng), y = uniform_point(a.dim(), 3.0, rng);
      const double r = Ur(rng), sig2 = (1 - r) * (1 + r);
      const double bound = C / std::sqrt(sig2) * std::exp(-(x - r * y).squaredNorm() / (2 * sig2));
      if (grad_y_F(a, x, y, r).norm() > bound) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("principal value: f odd about x with even local kernel") {
  for (const auto& a : {MultiIndex{2}, MultiIndex{1, 1}, MultiIndex{2, 0}}) {
    const int n = a.dim();
    const Eigen::VectorXd x = n == 1 ? vec({0.4}) : vec({0.4, -0.2});
    const CompactFunction f{[x](const Eigen::Ref<const Eigen::VectorXd>& y) {
                              const Eigen::VectorXd d = y - x;
                              return d(0) * plateau(d.norm(), 0.5, 1.0);
                            },
                            Ball{x, 1.0}};
    for (auto fam : {Family::Old, Family::New}) {
      const auto res = apply_riesz_pv(KernelSpec{a, kernel_family(fam), analytic_normalization(n, a.order())}, f, x);
      CHECK(res.excluded);
      CHECK(res.reliable);
      CHECK(std::abs(res.coarse - res.fine) < 1e-6);
    }
  }
}

TEST_CASE("principal value: masked constant equals minus the complement contribution") {
  for (const auto& a : {MultiIndex{1}, MultiIndex{2}, MultiIndex{1, 1}, MultiIndex{0, 1}}) {
    const int n = a.dim();
    const KernelSpec spec{a, KernelFamily::Old, analytic_normalization(n, a.order())};
    const Eigen::VectorXd x = n == 1 ? vec({0.3}) : vec({0.2, -0.1});
    const CompactFunction chi{[](const Eigen::Ref<const Eigen::VectorXd>& y) { return plateau(y.norm(), 2.5, 3.5); },
                              Ball{Eigen::VectorXd::Zero(n), 3.5}};
    const auto res = apply_riesz_pv(spec, chi, x);
    // R 1 = 0, so R chi(x) = -int k(x,y) (1 - chi(y)) dy over |y| > 2.5
    std::vector<double> br{2.5};
    while (br.back() < 14.0) br.push_back(br.back() + 0.25);
    const auto grid = polar_patch(Eigen::VectorXd::Zero(n), composite_legendre(br, 10), sphere_rule(n, 96));
    const double comp = integrate(grid, [&](const Eigen::Ref<const Eigen::VectorXd>& y) {
      return kernel_value(spec, x, y) * (1.0 - plateau(y.norm(), 2.5, 3.5));
    });
    // sup |chi| = 1 sets the scale
    CHECK(std::abs(res.value + comp) < 1e-8);
  }
}

TEST_CASE("plain quadrature off the support matches the spectral route") {
  // R(p psi)(x) + R(p (1 - psi) chi)(x) = R p(x) with x outside supp psi
  for (auto fam : {Family::Old, Family::New}) {
    for (const auto& a : {MultiIndex{1}, MultiIndex{3}, MultiIndex{1, 1}}) {
      const int n = a.dim();
      const KernelSpec spec{a, kernel_family(fam), analytic_normalization(n, a.order())};
      const HermiteCoeffs p = calibration_reference(n);
      const double p_image = riesz_apply(RieszOrder(a, fam), p).evaluate(n == 1 ? vec({1.6}) : vec({1.6, 0.3}));
      const Eigen::VectorXd x = n == 1 ? vec({1.6}) : vec({1.6, 0.3});
      const Eigen::VectorXd c = Eigen::VectorXd::Constant(n, -0.2);
      auto psi = [c](const Eigen::Ref<const Eigen::VectorXd>& y) { return plateau((y - c).norm(), 0.4, 0.7); };
      const CompactFunction near{[&](const Eigen::Ref<const Eigen::VectorXd>& y) { return p.evaluate(y) * psi(y); },
                                 Ball{c, 0.7}};
      const CompactFunction rest{[&](const Eigen::Ref<const Eigen::VectorXd>& y) {
                                   return p.evaluate(y) * (1.0 - psi(y)) * calibration_mask(y);
                                 },
                                 Ball{Eigen::VectorXd::Zero(n), kMaskOuter}};
      const auto off = apply_riesz_pv(spec, near, x);
      CHECK_FALSE(off.excluded);
      PVConfig dense;
      dense.radial_nodes = 16;
      dense.angular_nodes = 128;
      dense.far_panel = 0.15;
      const auto on = apply_riesz_pv(spec, rest, x, dense);
      CHECK(on.excluded);
      CHECK(std::abs(off.value + on.value - p_image) <= 1e-4 * std::max(1.0, std::abs(p_image)));
    }
  }
}

TEST_CASE("kernel route matches the spectral route on masked polynomials") {
  std::mt19937_64 rng(37);
  for (auto fam : {Family::Old, Family::New}) {
    for (const auto& a : {MultiIndex{1}, MultiIndex{2}, MultiIndex{3}, MultiIndex{1, 1}, MultiIndex{2, 1}}) {
      const int n = a.dim();
      const KernelSpec spec{a, kernel_family(fam), analytic_normalization(n, a.order())};
      const RieszOrder order(a, fam);
      for (int input = 0; input < 2; ++input) {
        const HermiteCoeffs p = random_coeffs(n, 4, rng);
        const HermiteCoeffs img = riesz_apply(order, p);
        const CompactFunction f{[&p](const Eigen::Ref<const Eigen::VectorXd>& y) {
                                  return p.evaluate(y) * calibration_mask(y);
                                },
                                Ball{Eigen::VectorXd::Zero(n), kMaskOuter}};
        double err = 0.0, scale = 0.0;
        for (int i = 0; i < (n == 1 ? 6 : 3); ++i) {
          const Eigen::VectorXd x = uniform_point(n, 1.5, rng);
          const double s = img.evaluate(x);
          err = std::max(err, std::abs(apply_riesz_pv(spec, f, x).value - s));
          scale = std::max(scale, std::abs(s));
        }
        CHECK(err / scale < 1e-4);
      }
    }
  }
}

TEST_CASE("odd half-power kernel against the old-kernel composition") {
  // D^alpha L^{k/2} f = R_alpha (L^k f), L^k f by Taylor jets
  const Eigen::VectorXd c = vec({0.3});
  const double R = 0.5;
  std::vector<double> br;
  for (int i = 0; i <= 80; ++i) br.push_back(c(0) - R + 2 * R * i / 80.0);
  const auto rule = composite_legendre(br, 16);
  for (int k : {1, 3}) {
    std::vector<double> f(rule.nodes.size()), Lkf(rule.nodes.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
      const Eigen::VectorXd y = vec({rule.nodes[j]});
      Jet u = bump_jet(c, R, y, 2 * k);
      f[j] = u.value();
      for (int i = 0; i < k; ++i) u = apply_ou(u, y);
      Lkf[j] = u.value();
    }
    const auto half = raw(MultiIndex{k}, KernelFamily::HalfPowerDerivative);
    const KernelSpec old{MultiIndex{k}, KernelFamily::Old, analytic_normalization(1, k)};
    for (double x : {1.2, 2.0, -1.5}) {
      double A = 0.0, B = 0.0;
      for (std::size_t j = 0; j < f.size(); ++j) {
        const Eigen::VectorXd y = vec({rule.nodes[j]});
        A += rule.weights[j] * kernel_value(half, vec({x}), y) * f[j];
        B += rule.weights[j] * kernel_value(old, vec({x}), y) * Lkf[j];
      }
      CHECK(A == Approx(B).epsilon(1e-5));
    }
  }
}

TEST_CASE("calibration against the spectral route") {
  const auto rec = calibrate_kernel(MultiIndex{1}, Family::Old);
  CHECK(rec.residual < 1e-4);
  CHECK_FALSE(rec.flagged);
  CHECK(rec.ratio() == Approx(1.0).epsilon(1e-5));
  const auto again = calibrate_kernel(MultiIndex{1}, Family::Old);
  CHECK(std::abs(again.c - rec.c) < 1e-10);

  const auto parsed = parse_calibration_line(format_calibration_line(rec));
  CHECK(parsed.c == rec.c);
  CHECK(parsed.residual == rec.residual);
  CHECK(parsed.alpha == rec.alpha);
  CHECK(format_calibration_line(parsed) == format_calibration_line(rec));
  CHECK_THROWS(parse_calibration_line("1,1,old,0.5"));
  CHECK_THROWS(parse_calibration_line("2,1,old,1,1,1,0,10,8,48,0.5,0.002,0.001,ok"));

  std::vector<CalibrationRecord> table;
  upsert_calibration(table, rec);
  auto changed = rec;
  changed.c = 0.25;
  upsert_calibration(table, changed);
  CHECK(table.size() == 1);
  CHECK(calibrated_spec(MultiIndex{1}, Family::Old, table).normalization == 0.25);
  CHECK(calibrated_spec(MultiIndex{2}, Family::Old, table).normalization == analytic_normalization(1, 2));

  CalibrationSettings coarse;
  coarse.pv.r_quad.nodes_per_panel = 1;
  coarse.pv.radial_nodes = 1;
  CHECK(calibrate_kernel(MultiIndex{1}, Family::New, coarse).flagged);
}

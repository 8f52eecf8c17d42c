#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussriesz/hermite.hpp"
#include "gaussriesz/riesz_spectral.hpp"
#include "gaussriesz/spectral.hpp"

using namespace gaussriesz;
using doctest::Approx;

TEST_CASE("chaos projections") {
  HermiteCoeffs f(2);
  f.set(MultiIndex{1, 0}, 1.0);
  f.set(MultiIndex{2, 0}, 1.0);
  const auto p1 = project(1, f);
  CHECK(p1.size() == 1);
  CHECK(p1(MultiIndex{1, 0}) == 1.0);
  std::mt19937_64 rng(3);
  const auto g = random_coeffs(2, 6, rng);
  CHECK(project(0, g).size() == 1);
  CHECK(project(0, g)(MultiIndex{0, 0}) == g(MultiIndex{0, 0}));
  HermiteCoeffs sum(2);
  for (int j = 0; j <= 6; ++j) sum += project(j, g);
  CHECK(max_abs_diff(sum, g) == 0.0);
  CHECK(pi0(HermiteCoeffs::basis(MultiIndex{0})).empty());
  CHECK(max_abs_diff(pi0(HermiteCoeffs::basis(MultiIndex{3})), HermiteCoeffs::basis(MultiIndex{3})) == 0.0);
  CHECK(max_abs_diff(pi0(pi0(g)), pi0(g)) == 0.0);
}

TEST_CASE("powers of the Ornstein-Uhlenbeck operator") {
  CHECK(apply_power(ou_power(1.0), HermiteCoeffs::basis(MultiIndex{2}))(MultiIndex{2}) == 2.0);
  CHECK(apply_power(shifted_ou_power(-0.5), HermiteCoeffs::basis(MultiIndex{3}))(MultiIndex{3}) == Approx(0.5));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 1 + trial % 3;
    const auto f = random_coeffs(dim, 10, rng);
    const auto g = random_coeffs(dim, 10, rng);
    for (int k = 1; k <= 4; ++k) {
      const auto r = apply_power(ou_power(k), apply_power(ou_power(-k), f));
      CHECK(max_abs_diff(r, pi0(f)) < 1e-12);
    }
    const auto pf = pi0(f);
    const auto lhs = apply_power(ou_power(0.7), apply_power(ou_power(-1.9), pf));
    CHECK(max_abs_diff(lhs, apply_power(ou_power(-1.2), pf)) < 1e-14 * 10);
    const double a = dot(apply_power(ou_power(1.5), f), g), b = dot(f, apply_power(ou_power(1.5), g));
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
    HermiteCoeffs ladder(dim);
    for (int i = 0; i < dim; ++i) ladder += raise(i, lower(i, f));
    CHECK(max_abs_diff(ladder, apply_power(ou_power(1.0), f)) < 1e-12);
  }
}

TEST_CASE("projection of a polynomial from grid samples") {
  const auto g = full_space_grid(2, 12);
  Eigen::VectorXd v(g.size());
  for (Eigen::Index j = 0; j < g.size(); ++j) {
    v(j) = 2.0 * hermite_normalized(MultiIndex{2, 1}, g.nodes.col(j)) - hermite_normalized(MultiIndex{0, 1}, g.nodes.col(j));
  }
  const auto c = hermite_project(g, v, 6);
  CHECK(c(MultiIndex{2, 1}) == Approx(2.0).epsilon(1e-12));
  CHECK(c(MultiIndex{0, 1}) == Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(c(MultiIndex{1, 1})) < 1e-12);
}

TEST_CASE("old Riesz transforms") {
  const RieszOrder r1(MultiIndex{1}, Family::Old), r2(MultiIndex{2}, Family::Old);
  for (int m = 1; m <= 40; ++m) {
    const auto img = riesz_old(r1, HermiteCoeffs::basis(MultiIndex{m}));
    CHECK(img(MultiIndex{m - 1}) == Approx(1.0).epsilon(1e-14));
  }
  CHECK(riesz_old(r2, HermiteCoeffs::basis(MultiIndex{2}))(MultiIndex{0}) == Approx(std::sqrt(0.5)));
  CHECK(riesz_old(r2, HermiteCoeffs::basis(MultiIndex{5}))(MultiIndex{3}) == Approx(std::sqrt(4.0 / 5.0)));
  CHECK(riesz_old(r1, HermiteCoeffs::basis(MultiIndex{0})).empty());
  CHECK_THROWS(RieszOrder(MultiIndex{0, 0}, Family::Old));
  CHECK_THROWS(riesz_old(RieszOrder(MultiIndex{1}, Family::New), HermiteCoeffs(1)));
  // multiplier <= 1 coefficient-wise for the old family
  for (const auto& alpha : {MultiIndex{1, 0}, MultiIndex{2, 1}, MultiIndex{1, 1, 1}, MultiIndex{0, 3}}) {
    const RieszOrder r(alpha, Family::Old);
    for (const auto& beta : indices_up_to_degree(alpha.dim(), alpha.dim() == 3 ? 12 : 30)) {
      CHECK(r.multiplier(beta) <= 1.0 + 1e-15);
    }
  }
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_coeffs(2, 12, rng);
    CHECK(riesz_old(RieszOrder(MultiIndex{2, 1}, Family::Old), f).norm() <= f.norm());
  }
}

TEST_CASE("new Riesz transforms") {
  const RieszOrder r1(MultiIndex{1}, Family::New);
  for (int m = 0; m <= 40; ++m) {
    const auto img = riesz_new(r1, HermiteCoeffs::basis(MultiIndex{m}));
    CHECK(img(MultiIndex{m + 1}) == Approx(1.0).epsilon(1e-14));
  }
  const RieszOrder r11(MultiIndex{1, 1}, Family::New);
  CHECK(riesz_new(r11, HermiteCoeffs::basis(MultiIndex{0, 0}))(MultiIndex{1, 1}) == Approx(1.0));
  CHECK(riesz_new(r11, HermiteCoeffs(2)).empty());
  // <R* f, g> = <f, (L+I)^{-k/2} D^alpha g>
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const MultiIndex alpha = trial % 2 ? MultiIndex{2, 1} : MultiIndex{0, 1};
    const auto f = random_coeffs(2, 10, rng);
    const auto g = random_coeffs(2, 14, rng);
    const RieszOrder r(alpha, Family::New);
    const double lhs = dot(riesz_new(r, f), g);
    const double rhs = dot(f, apply_power(shifted_ou_power(-0.5 * alpha.order()), apply_D(alpha, g)));
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("pointwise evaluation of Riesz images") {
  Eigen::VectorXd x(1);
  x << 0.83;
  CHECK(riesz_apply_pointwise(RieszOrder(MultiIndex{1}, Family::Old), HermiteCoeffs::basis(MultiIndex{1}), x) ==
        Approx(1.0));
  x << 0.0;
  CHECK(riesz_apply_pointwise(RieszOrder(MultiIndex{1}, Family::New), HermiteCoeffs::basis(MultiIndex{0}), x) ==
        Approx(0.0));
  CHECK(riesz_apply_pointwise(RieszOrder(MultiIndex{1}, Family::Old), HermiteCoeffs::basis(MultiIndex{0}), x) == 0.0);
  CHECK_THROWS_AS(riesz_apply_pointwise(RieszOrder(MultiIndex{1}, Family::New),
                                        HermiteCoeffs::basis(MultiIndex{kPointwiseDegreeCap}), x),
                  std::out_of_range);
}

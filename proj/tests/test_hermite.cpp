#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussriesz/hermite.hpp"
#include "gaussriesz/hermite_coeffs.hpp"
#include "gaussriesz/quadrature.hpp"

using namespace gaussriesz;
using doctest::Approx;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

}  // namespace

TEST_CASE("multi-index basics") {
  MultiIndex a{2, 1};
  CHECK(a.order() == 3);
  CHECK(a.factorial() == 2.0);
  CHECK(a.plus_unit(1) == MultiIndex{2, 2});
  CHECK(a.minus_unit(0) == MultiIndex{1, 1});
  CHECK_THROWS_AS(MultiIndex({0, 1}).minus_unit(0), std::domain_error);
  CHECK_THROWS_AS(MultiIndex({-1}), std::invalid_argument);
  CHECK(MultiIndex::parse("1,0") == MultiIndex{1, 0});
  CHECK(MultiIndex::parse("3") == MultiIndex{3});
  CHECK_THROWS(MultiIndex::parse("1,x"));
  CHECK(indices_of_degree(3, 2).size() == 6);
  CHECK(indices_up_to_degree(2, 30).size() == 496);
  CHECK((MultiIndex{2, 1} - MultiIndex{1, 1}) == MultiIndex{1, 0});
}

TEST_CASE("one-dimensional Hermite values") {
  CHECK(hermite_eval_1d(0, 0.7) == 1.0);
  CHECK(hermite_eval_1d(1, 0.7) == Approx(1.4).epsilon(1e-15));
  CHECK(hermite_eval_1d(2, 0.7) == Approx(-0.04).epsilon(1e-13));
  // reference values from arbitrary-precision evaluation
  CHECK(hermite_eval_1d(5, 1.3) == Approx(-76.70624000000001).epsilon(1e-13));
  CHECK(hermite_eval_1d(10, -0.45) == Approx(15763.117949540102).epsilon(1e-13));
  CHECK(hermite_eval_1d(30, 2.0) == Approx(1.4736842857711186e21).epsilon(1e-12));
  CHECK(hermite_eval_1d(60, 0.5) == Approx(2.5158814745996503e49).epsilon(1e-11));
  CHECK(hermite_normalized_1d(5, 1.3) == Approx(-1.2378416252924552).epsilon(1e-13));
  CHECK(hermite_normalized_1d(10, -0.45) == Approx(0.25858934760330794).epsilon(1e-13));
  CHECK(hermite_normalized_1d(30, 2.0) == Approx(2.7613692233426988).epsilon(1e-12));
  CHECK(hermite_normalized_1d(60, 0.5) == Approx(0.256863787874325386).epsilon(1e-11));
  CHECK_THROWS_AS(hermite_eval_1d(61, 0.1), std::out_of_range);
  CHECK_THROWS_AS(hermite_eval_1d(-1, 0.1), std::out_of_range);
}

TEST_CASE("Rodrigues relation through finite differences") {
  // d/dt [(-1)^m H_m e^{-t^2}] = (-1)^{m+1} H_{m+1} e^{-t^2}
  for (int m = 0; m < 8; ++m) {
    for (double t : {-1.1, 0.3, 0.9}) {
      const double h = 1e-5;
      auto g = [m](double s) { return hermite_eval_1d(m, s) * std::exp(-s * s); };
      const double fd = (g(t + h) - g(t - h)) / (2 * h);
      CHECK(-fd == Approx(hermite_eval_1d(m + 1, t) * std::exp(-t * t)).epsilon(1e-7));
    }
  }
}

TEST_CASE("float and long double instantiations") {
  CHECK(hermite_eval_1d<float>(3, 0.5f) == Approx(8 * 0.125 - 12 * 0.5).epsilon(1e-6));
  CHECK(static_cast<double>(hermite_eval_1d<long double>(4, 0.25L)) ==
        Approx(16 * std::pow(0.25, 4) - 48 * 0.0625 + 12).epsilon(1e-15));
}

TEST_CASE("tensor Hermite evaluation") {
  CHECK(hermite_eval(MultiIndex{0, 0}, vec({3, -1})) == 1.0);
  CHECK(hermite_eval(MultiIndex{1, 1}, vec({1, 1})) == 4.0);
  CHECK(hermite_eval(MultiIndex{2, 1}, vec({0.5, 0.5})) == Approx(-1.0).epsilon(1e-14));
  CHECK_THROWS_AS(hermite_eval(MultiIndex{2, 1}, vec({0.5})), std::invalid_argument);
  const MultiIndex a{3, 2};
  const Eigen::VectorXd u = vec({0.3, -1.2});
  CHECK(hermite_normalized(a, u) == Approx(hermite_eval(a, u) / hermite_norm_factor(a)).epsilon(1e-13));
  CHECK(hermite_norm_factor(a) == Approx(std::sqrt(32.0 * 12.0)).epsilon(1e-15));
}

TEST_CASE("normalized recurrence agrees with scaled physicists' values") {
  for (int m = 0; m <= 60; ++m) {
    for (double t : {-4.5, -1.0, 0.0, 0.37, 2.2, 5.0}) {
      const long double ref = hermite_eval_1d<long double>(m, t) / std::sqrt(std::ldexp(std::tgamma(m + 1.0L), m));
      CHECK(hermite_normalized_1d(m, t) == Approx(static_cast<double>(ref)).epsilon(1e-13));
    }
  }
}

TEST_CASE("ladder exactness of the derivative") {
  // (1/sqrt 2) d/dt h_m with H_m' = 2m H_{m-1}, derivative side in extended precision
  for (int m = 1; m <= 30; ++m) {
    const long double norm_m = std::sqrt(std::ldexp(std::tgamma(m + 1.0L), m));
    for (int j = 0; j < 64; ++j) {
      const double t = -5.0 + 10.0 * j / 63.0;
      const double dh = static_cast<double>(2.0L * m * hermite_eval_1d<long double>(m - 1, t) / norm_m /
                                            std::sqrt(2.0L));
      CHECK(std::abs(dh - std::sqrt(double(m)) * hermite_normalized_1d(m - 1, t)) < 1e-9);
    }
  }
}

TEST_CASE("lower and raise examples") {
  const MultiIndex z{0}, one{1}, two{2}, three{3}, four{4};
  CHECK(lower(0, HermiteCoeffs::basis(z)).pruned().empty());
  CHECK(lower(0, HermiteCoeffs::basis(one))(z) == Approx(1.0));
  CHECK(lower(0, HermiteCoeffs::basis(four))(three) == Approx(2.0));
  CHECK(raise(0, HermiteCoeffs::basis(z))(one) == Approx(1.0));
  CHECK(raise(0, HermiteCoeffs::basis(two))(three) == Approx(std::sqrt(3.0)));

  // delta_1 h_4 by central differences of h_4
  for (double t : {-1.3, 0.2, 1.7}) {
    const double h = 1e-5;
    const double fd = (hermite_normalized_1d(4, t + h) - hermite_normalized_1d(4, t - h)) / (2 * h);
    CHECK(fd / std::sqrt(2.0) == Approx(2.0 * hermite_normalized_1d(3, t)).epsilon(1e-8));
  }
  // closed form -(1/sqrt 2) e^{t^2} d/dt (e^{-t^2} h_2) on a grid
  for (double t = -3.0; t <= 3.0; t += 0.25) {
    const double h2 = hermite_normalized_1d(2, t);
    const double dh2 = 2.0 * 2.0 * hermite_eval_1d(1, t) / std::sqrt(8.0);
    const double closed = -(dh2 - 2.0 * t * h2) / std::sqrt(2.0);
    CHECK(closed == Approx(std::sqrt(3.0) * hermite_normalized_1d(3, t)).epsilon(1e-12).scale(1e-12));
  }
  // closed form on h_0 gives sqrt(2) x = h_1
  CHECK(-(0.0 - 2.0 * 0.8 * 1.0) / std::sqrt(2.0) == Approx(hermite_normalized_1d(1, 0.8)));
}

TEST_CASE("apply_D and apply_Dstar examples") {
  CHECK(apply_D(MultiIndex{2}, HermiteCoeffs::basis(MultiIndex{2}))(MultiIndex{0}) == Approx(std::sqrt(2.0)));
  CHECK(apply_D(MultiIndex{1, 1}, HermiteCoeffs::basis(MultiIndex{1, 0})).pruned().empty());
  CHECK(apply_Dstar(MultiIndex{1, 1}, HermiteCoeffs::basis(MultiIndex{0, 0}))(MultiIndex{1, 1}) == Approx(1.0));
  for (const auto& alpha : {MultiIndex{3}, MultiIndex{2, 1}, MultiIndex{1, 2, 2}}) {
    const auto h0 = HermiteCoeffs::basis(MultiIndex::zero(alpha.dim()));
    const auto r = apply_D(alpha, apply_Dstar(alpha, h0));
    CHECK(r.pruned(1e-14).size() == 1);
    CHECK(r(MultiIndex::zero(alpha.dim())) > 0.0);
    CHECK(r(MultiIndex::zero(alpha.dim())) == Approx(alpha.factorial()).epsilon(1e-14));
  }
}

TEST_CASE("adjointness of raise and lower on random pairs") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + trial % 3;
    const int deg = dim == 3 ? 8 : 15;
    const auto f = random_coeffs(dim, deg, rng);
    const auto g = random_coeffs(dim, deg, rng);
    for (int i = 0; i < dim; ++i) {
      const double lhs = dot(raise(i, f), g), rhs = dot(f, lower(i, g));
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("expansion evaluation matches the basis functions") {
  HermiteCoeffs f(2);
  f.set(MultiIndex{2, 1}, 0.5);
  f.set(MultiIndex{0, 3}, -1.5);
  const Eigen::VectorXd x = vec({0.4, -0.9});
  const double ref = 0.5 * hermite_normalized(MultiIndex{2, 1}, x) - 1.5 * hermite_normalized(MultiIndex{0, 3}, x);
  CHECK(f.evaluate(x) == Approx(ref).epsilon(1e-14));
  CHECK(f.norm() == Approx(std::sqrt(0.25 + 2.25)));
}

TEST_CASE("Gauss-Hermite orthonormality") {
  for (int N : {5, 20, 40}) {
    const auto rule = gauss_hermite_rule<double>(N);
    CHECK(rule.weights.sum() / std::sqrt(M_PI) == Approx(1.0).epsilon(1e-13));
    const int maxdeg = N - 1;  // product degree <= 2N - 2
    for (int a = 0; a <= maxdeg; a += 3) {
      for (int b = 0; b <= maxdeg; b += 2) {
        double s = 0.0;
        for (int i = 0; i < N; ++i) {
          s += rule.weights(i) * hermite_normalized_1d(a, rule.nodes(i)) * hermite_normalized_1d(b, rule.nodes(i));
        }
        CHECK(std::abs(s / std::sqrt(M_PI) - (a == b ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
  const auto gl = gauss_legendre_rule<double>(12);
  double s = 0;
  for (int i = 0; i < 12; ++i) s += gl.weights(i) * std::pow(gl.nodes(i), 22);
  CHECK(s == Approx(2.0 / 23.0).epsilon(1e-14));
  const auto gll = gauss_legendre_rule<long double>(6);
  CHECK(static_cast<double>(gll.weights.sum()) == Approx(2.0).epsilon(1e-16));
}

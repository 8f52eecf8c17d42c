#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussriesz/geometry.hpp"
#include "gaussriesz/hermite.hpp"

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

TEST_CASE("admissibility function") {
  CHECK(m_admissibility(0.5) == 1.0);
  CHECK(m_admissibility(2.0) == 0.5);
  CHECK(m_admissibility(1.0) == 1.0);
  double prev = m_admissibility(0.0);
  for (double s = 0.0; s < 10.0; s += 0.1) {
    CHECK(m_admissibility(s) <= prev);
    prev = m_admissibility(s);
  }
  CHECK_THROWS(AdmissibleBall(vec({2.0, 0.0}), 0.6));
  CHECK_NOTHROW(AdmissibleBall(vec({2.0, 0.0}), 0.5));
  CHECK_THROWS(AdmissibleBall(vec({0.0}), 0.0));
  AdmissibleBall b(vec({0.0, 0.0}), 0.1);
  CHECK(b.r_By(vec({1.0, 0.0})) == Approx(0.05));
  CHECK(std::isinf(b.r_By(vec({0.0, 0.0}))));
}

TEST_CASE("weight function") {
  for (double r : {1.0, 1.5, 3.0}) {
    const Eigen::VectorXd x = vec({r, 0.0});
    for (int k = 1; k < 6; ++k) {
      CHECK(WeightFunction{k}(x) >= 1.0);
      CHECK(WeightFunction{k + 1}(x) >= WeightFunction{k}(x));
    }
  }
  CHECK(WeightFunction{3}(vec({0.5})) == Approx(1.5));
}

TEST_CASE("full-space grid") {
  for (int n = 1; n <= 3; ++n) {
    const auto g = full_space_grid(n, n == 3 ? 12 : 30);
    CHECK(gamma_measure(g) == Approx(1.0).epsilon(1e-12));
  }
  const auto g = full_space_grid(2, 10);
  const MultiIndex a{3, 2}, b{3, 2}, c{1, 4};
  auto inner = [&](const MultiIndex& p, const MultiIndex& q) {
    return integrate(g, [&](const auto& x) { return hermite_normalized(p, x) * hermite_normalized(q, x); });
  };
  CHECK(inner(a, b) == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(inner(a, c)) < 1e-12);
  CHECK_THROWS(gamma_measure(QuadratureGrid{}));
}

TEST_CASE("Gaussian measure of balls") {
  CHECK(gamma_measure(Ball{vec({0.0}), 1.0}) == Approx(0.8427007929497149).epsilon(1e-12));
  const double g = gamma_measure(Ball{vec({3.0, 0.0}), 0.1});
  const double vol = M_PI * 0.01;
  CHECK(g > std::exp(-3.1 * 3.1) * vol / M_PI);
  CHECK(g < std::exp(-2.9 * 2.9) * vol / M_PI);
  const auto d = doubling_ratio(AdmissibleBall(vec({0.0}), 1.0));
  REQUIRE(d.has_value());
  CHECK(*d == Approx(1.1811099186640317).epsilon(1e-12));
  for (int n = 1; n <= 3; ++n) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    c(0) = 0.7;
    const auto small = doubling_ratio(AdmissibleBall(c, 1e-3));
    REQUIRE(small.has_value());
    CHECK(*small == Approx(std::pow(2.0, n)).epsilon(1e-2));
  }
}

TEST_CASE("region additivity") {
  for (int n = 1; n <= 3; ++n) {
    for (double r : {0.05, 0.4, 1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
      c(0) = 0.8;
      const Ball b{c, r};
      GridSpec spec;
      if (n == 3) spec.angular_nodes = 32;
      CHECK(gamma_measure(b, spec) + gamma_complement_measure(b, spec) == Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("doubling constant over random admissible balls") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double fitted = 0.0, worst_holdout = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 3;
    Eigen::VectorXd c(n);
    for (int j = 0; j < n; ++j) c(j) = 6.0 * U(rng) - 3.0;
    const double r = m_admissibility(c.norm()) * (0.01 + 0.99 * U(rng));
    GridSpec spec;
    spec.angular_nodes = n == 3 ? 16 : 48;
    spec.radial_nodes = 8;
    const auto d = doubling_ratio(AdmissibleBall(c, r), spec);
    REQUIRE(d.has_value());
    if (i < 500) {
      fitted = std::max(fitted, *d);
    } else {
      worst_holdout = std::max(worst_holdout, *d);
    }
  }
  MESSAGE("fitted doubling constant " << fitted << ", holdout max " << worst_holdout);
  CHECK(worst_holdout <= 1.25 * fitted);
}

TEST_CASE("L^p norms") {
  const auto g = full_space_grid(1, 30);
  CHECK(lp_norm([](const auto&) { return 1.0; }, 1, g) == Approx(1.0).epsilon(1e-12));
  CHECK(lp_norm([](const auto& x) { return hermite_normalized_1d(2, x(0)); }, 2, g) == Approx(1.0).epsilon(1e-12));
  const Ball unit{vec({0.0}), 1.0};
  auto absx = [](const auto& x) { return x.norm(); };
  const double l1 = lp_norm(absx, 1, ball_grid(unit, {})) + lp_norm(absx, 1, complement_grid(unit, {}));
  CHECK(l1 == Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(lp_norm(absx, 1, ball_grid(unit, {}), WeightFunction{3}) > lp_norm(absx, 1, ball_grid(unit, {})));
  CHECK_THROWS_AS(lp_norm([](const auto&) { return NAN; }, 1, g), std::domain_error);
}

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "gaussriesz/hermite.hpp"
#include "gaussriesz/jets.hpp"

using namespace gaussriesz;
using doctest::Approx;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x(i++) = e;
  return x;
}

// H_beta(x0 + h) as a jet, via H_{m+1} = 2t H_m - 2m H_{m-1}
Jet hermite_jet(const MultiIndex& beta, const Eigen::VectorXd& x0, int order) {
  const int n = beta.dim();
  const auto xs = coordinate_jets(x0, order);
  Jet out = Jet::constant(n, order, 1.0);
  for (int i = 0; i < n; ++i) {
    Jet prev = Jet::constant(n, order, 1.0), cur = xs[static_cast<std::size_t>(i)] * 2.0;
    if (beta[i] == 0) cur = prev;
    for (int m = 1; m < beta[i]; ++m) {
      Jet next = xs[static_cast<std::size_t>(i)] * cur * 2.0 - prev * (2.0 * m);
      prev = cur;
      cur = next;
    }
    out = out * cur;
  }
  return out;
}

}  // namespace

TEST_CASE("products expand binomials") {
  const Jet x = Jet::variable(1, 8, 0, 2.0);
  Jet p = Jet::constant(1, 8, 1.0);
  for (int k = 0; k < 5; ++k) p = p * x;
  // (2 + h)^5
  const double binom[] = {1, 5, 10, 10, 5, 1};
  for (int j = 0; j <= 8; ++j) {
    const double expect = j <= 5 ? binom[j] * std::pow(2.0, 5 - j) : 0.0;
    CHECK(p.coeff(MultiIndex{j}) == Approx(expect));
  }

  const auto xs = coordinate_jets(vec({1.0, -0.5, 0.25}), 4);
  const Jet s = xs[0] + xs[1] + xs[2];
  const Jet q = s * s;
  CHECK(q.value() == Approx(0.5625));
  CHECK(q.derivative(MultiIndex{1, 1, 0}) == Approx(2.0));
  CHECK(q.derivative(MultiIndex{0, 0, 2}) == Approx(2.0));
  CHECK(q.derivative(MultiIndex{0, 1, 0}) == Approx(1.5));
  CHECK(q.coeff(MultiIndex{1, 1, 1}) == 0.0);
}

TEST_CASE("exp and reciprocal") {
  const Jet x = Jet::variable(1, 10, 0, 0.3);
  const Jet e = exp(x);
  double f = 1.0;
  for (int j = 0; j <= 10; ++j) {
    if (j > 0) f *= j;
    CHECK(e.coeff(MultiIndex{j}) == Approx(std::exp(0.3) / f).epsilon(1e-14));
  }

  const auto xs = coordinate_jets(vec({0.7, 1.1}), 6);
  const Jet w = Jet::constant(2, 6, 1.0) + xs[0] * xs[1] + xs[1] * xs[1] * 0.5;
  const Jet one = w * reciprocal(w);
  CHECK(one.value() == Approx(1.0));
  for (std::size_t i = 1; i < one.size(); ++i) CHECK(std::abs(one[i]) < 1e-12);

  CHECK_THROWS_AS(reciprocal(Jet(1, 3)), std::domain_error);
}

TEST_CASE("bump jet against symbolic derivatives") {
  // d^j/dx^j exp(-1/(1 - (x - 0.3)^2/0.25)) at x = 0.45
  const double ref[] = {0.333237077156224, -0.482893965206459, -3.79309778893002, -11.9918269117720,
                        -94.4829909741566, -132.002868702772,  6823.66678579897};
  const Jet b = bump_jet(vec({0.3}), 0.5, vec({0.45}), 6);
  for (int j = 0; j <= 6; ++j) CHECK(b.derivative(MultiIndex{j}) == Approx(ref[j]).epsilon(1e-12));

  CHECK(bump_jet(vec({0.0, 0.0}), 1.0, vec({1.2, 0.0}), 4).value() == 0.0);
  CHECK(bump_jet(vec({0.0, 0.0}), 1.0, vec({0.0, 0.0}), 4).value() == Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(bump_jet(vec({0.0}), 0.0, vec({0.1}), 2), std::invalid_argument);
}

TEST_CASE("partial derivatives") {
  const auto xs = coordinate_jets(vec({0.4, -0.9}), 7);
  const Jet f = exp(xs[0] * xs[1]);
  const Jet dx = partial(f, 0);
  CHECK(dx.order() == 6);
  // d/dx exp(xy) = y exp(xy), d^2/dxdy = (1 + xy) exp(xy)
  const double e = std::exp(-0.36);
  CHECK(dx.value() == Approx(-0.9 * e));
  CHECK(partial(dx, 1).value() == Approx((1.0 - 0.36) * e));
  for (const auto& beta : indices_up_to_degree(2, 6)) {
    CHECK(dx.derivative(beta) == Approx(f.derivative(beta.plus_unit(0))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(partial(f, 2), std::out_of_range);
}

TEST_CASE("OU operator on Hermite polynomials") {
  for (const auto& x0 : {vec({0.8}), vec({0.3, -1.2}), vec({-0.4, 0.9, 1.5})}) {
    const int n = static_cast<int>(x0.size());
    for (const auto& beta : indices_up_to_degree(n, 5)) {
      const Jet h = hermite_jet(beta, x0, 9);
      CHECK(h.value() == Approx(hermite_eval(beta, x0)).epsilon(1e-12));
      const Jet Lh = apply_ou(h, x0);
      CHECK(Lh.order() == 7);
      const double scale = std::max(1.0, std::abs(h.value()));
      for (std::size_t i = 0; i < Lh.size(); ++i) {
        const auto& ex = Lh.layout().exps[i];
        const double expect = beta.order() * h[static_cast<std::size_t>(h.layout().index(ex[0], ex[1], ex[2]))];
        CHECK(std::abs(Lh[i] - expect) <= 1e-11 * scale * std::max(1.0, std::abs(expect)));
      }
    }
  }
}

TEST_CASE("shape checks") {
  CHECK_THROWS_AS(Jet(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(Jet(1, 17), std::invalid_argument);
  CHECK_THROWS_AS(Jet(1, 3) + Jet(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(apply_ou(Jet(1, 1), vec({0.0})), std::invalid_argument);
  const Jet t = Jet::variable(2, 5, 1, 3.0).truncated(1);
  CHECK(t.order() == 1);
  CHECK(t.coeff(MultiIndex{0, 1}) == 1.0);
}

#include <doctest.h>

#include <cmath>

#include "gaussriesz/atoms.hpp"

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

TEST_CASE("probe series against closed forms") {
  // mpmath: sqrt(pi)/2 erfi(s), and -sqrt(pi) int_0^s e^{t^2} erf(t) dt
  const auto E = ProbeSeries::harmonic();
  CHECK(E(0.0) == 0.0);
  CHECK(E(0.7) == Approx(0.83330405350696835).epsilon(1e-14));
  CHECK(E(2.5) == Approx(115.56022905748088).epsilon(1e-14));
  CHECK(E(-3.0) == Approx(-1444.5451228927142).epsilon(1e-14));
  const auto h1 = ProbeSeries::ladder(1);
  CHECK(h1(0.6) == Approx(-0.40768877434416305).epsilon(1e-14));
  CHECK(h1(2.0) == Approx(-27.43273915249977).epsilon(1e-14));
  CHECK(h1(-4.0) == Approx(-2037257.1980042255).epsilon(1e-13));
  CHECK(ProbeSeries::ladder(0)(3.3) == 1.0);
  CHECK_THROWS_AS(E(9.5), std::domain_error);
  CHECK_THROWS_AS(ProbeSeries::ladder(-1), std::invalid_argument);
}

TEST_CASE("constant atom") {
  const auto a = H1Atom::constant(2);
  CHECK(a.is_constant());
  CHECK(a(vec({3.0, -1.0})) == 1.0);
  CHECK(validate_h1_atom(a).passed());
  CHECK_THROWS_AS(validate_as_xk(a, 1), std::invalid_argument);
}

TEST_CASE("H1 atom on B(0, 1/2) saturates its L2 bound") {
  const AdmissibleBall B(vec({0.0}), 0.5);
  const auto a = make_h1_atom(B, BumpProfile::inside(B));
  CHECK(a.certificate().gamma_ball == Approx(0.5204998778130465).epsilon(1e-12));
  CHECK(a.certificate().l2 == Approx(1.0 / std::sqrt(0.5204998778130465)).epsilon(1e-12));
  CHECK(std::abs(a.certificate().mean) < 1e-12);
  CHECK(validate_h1_atom(a).passed());
  const auto twice = validate_h1_atom(a.scaled(2.0));
  CHECK_FALSE(twice.passed());
  CHECK(twice.find("l2")->status == CheckStatus::Fail);
}

TEST_CASE("profile construction errors") {
  const AdmissibleBall B(vec({0.5}), 0.4);
  CHECK_THROWS_AS(BumpProfile(vec({0.5}), 0.2, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(BumpProfile(vec({0.5}), 0.2, 0.19999), std::invalid_argument);
  CHECK_THROWS_AS(BumpProfile::inside(B, 0.9, 0.45, vec({0.2})), std::invalid_argument);
  CHECK_THROWS_AS(make_xk_atom(4, B, BumpProfile::inside(B)), std::invalid_argument);
  CHECK_THROWS_AS(AdmissibleBall(vec({3.0}), 0.5), std::invalid_argument);
}

TEST_CASE("X^k atoms certify for every order up to k") {
  struct Case {
    int n, k;
    double c, r;
  };
  for (const Case& cs : {Case{1, 1, 0.5, 0.3}, Case{1, 2, -1.5, 0.5}, Case{1, 3, 0.5, 0.6}, Case{2, 2, 0.4, 0.5},
                         Case{2, 3, 0.3, 0.7}}) {
    CAPTURE(cs.n);
    CAPTURE(cs.k);
    const AdmissibleBall B(Eigen::VectorXd::Constant(cs.n, cs.c), cs.r);
    const auto a = make_xk_atom(cs.k, B, BumpProfile::inside(B));
    CHECK(std::abs(a.certificate().mean) < 1e-10);
    CHECK(a.certificate().l2 == Approx(omega_k(cs.k, cs.r) / std::sqrt(a.certificate().gamma_ball)).epsilon(1e-12));
    for (int j = 1; j <= cs.k; ++j) {
      CAPTURE(j);
      const auto rep = validate_xk_atom(a, j);
      for (const auto& c : rep.checks) {
        CAPTURE(c.name);
        CAPTURE(c.value);
        CHECK(c.status != CheckStatus::Fail);
        CHECK(c.status != CheckStatus::PrecisionLimited);
      }
      REQUIRE(rep.weighted_chain.size() == 4);
      CHECK(rep.weighted_chain[3] == Approx(1.0 + std::pow(2.0, j - 2)));
      CHECK(rep.weighted_chain[2] <= rep.weighted_chain[3]);
    }
    CHECK(validate_h1_atom(a.as_h1_atom()).passed());
  }
}

TEST_CASE("order-3 weighted norm stays below 3") {
  const AdmissibleBall B(vec({0.8, -0.2}), 0.6);
  const auto a = make_xk_atom(3, B, BumpProfile::inside(B));
  const auto rep = validate_xk_atom(a, 3);
  CHECK(rep.weighted_chain[0] <= 3.0);
  CHECK(rep.weighted_chain[0] <= rep.weighted_chain[1]);
}

TEST_CASE("proposition ratio is flat along a shrinking family") {
  double lo = INFINITY, hi = 0.0;
  for (double r : {0.8, 0.4, 0.2, 0.1}) {
    const AdmissibleBall B(vec({0.3}), r);
    const auto rep = validate_xk_atom(make_xk_atom(2, B, BumpProfile::inside(B)), 2);
    lo = std::min(lo, rep.proposition_ratio);
    hi = std::max(hi, rep.proposition_ratio);
  }
  CHECK(hi / lo < 1.1);
}

TEST_CASE("off-centre H1 atom is not an X^1 atom") {
  const AdmissibleBall B(vec({0.5}), 0.4);
  const auto a = make_h1_atom(B, BumpProfile::inside(B, 0.5, 0.2, vec({0.15})));
  CHECK(validate_h1_atom(a).passed());
  const auto rep = validate_as_xk(a, 1);
  CHECK_FALSE(rep.passed());
  CHECK(rep.find("probes")->status == CheckStatus::Fail);
}

TEST_CASE("order-3 reconstruction on a tiny ball is precision limited") {
  const AdmissibleBall B(vec({0.5}), 0.15);
  const auto rep = validate_xk_atom(make_xk_atom(3, B, BumpProfile::inside(B)), 3);
  CHECK(rep.rounding_floor > 0.25 * 1e-4);
  CHECK(rep.find("reconstruction")->status == CheckStatus::PrecisionLimited);
  CHECK_FALSE(rep.passed());
}

TEST_CASE("atom construction is deterministic") {
  const AdmissibleBall B(vec({0.1, 0.2}), 0.3);
  const auto a = make_xk_atom(2, B, BumpProfile::inside(B));
  const auto b = make_xk_atom(2, B, BumpProfile::inside(B));
  CHECK((a.samples().values.array() == b.samples().values.array()).all());
  CHECK(a.scale() == b.scale());
}

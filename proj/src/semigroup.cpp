#include "gaussriesz/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "gaussriesz/hermite.hpp"
#include "gaussriesz/quadrature.hpp"

namespace gaussriesz {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

LineRule axis_rule(const std::vector<double>& breaks, int nodes) { return composite_legendre(breaks, nodes); }

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

void SemigroupSettings::validate() const {
  if (min_y_panels < 1 || !(y_panel > 0.0) || y_nodes < 2 || x_nodes < 2 || t_nodes < 2) throw std::invalid_argument("semigroup rule sizes too small");
  if (!(near_factor >= 1.0) || !(near_panel > 0.0) || !(far_panel > 0.0)) {
    throw std::invalid_argument("semigroup panel widths must be positive");
  }
  if (!(x_extent > 0.0) || !(log_t_panel > 0.0) || !(t_split > 0.5)) throw std::invalid_argument("bad semigroup extents");
  if (chaos_degree < 1 || chaos_degree > 60) throw std::invalid_argument("chaos_degree must be 1..60");
  if (taylor_terms < 1 || taylor_terms > 5) throw std::invalid_argument("taylor_terms must be 1..5");
  if (!(small_t_width > 0.0)) throw std::invalid_argument("small_t_width must be positive");
}

Jet riesz_derivative_jet(const RieszOrder& order, const Jet& f, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  if (f.order() < order.order()) throw std::invalid_argument("jet order below the transform order");
  Jet g = f;
  for (int i = 0; i < order.dim(); ++i) {
    for (int m = 0; m < order.alpha()[i]; ++m) {
      Jet d = partial(g, i);
      if (order.family() == Family::Old) {
        g = d * kInvSqrt2;
      } else {
        // delta*_i = 2^{-1/2} (-d_i + 2 x_i)
        const Jet xi = Jet::variable(g.dim(), d.order(), i, x0(i));
        g = (xi * g.truncated(d.order()) * 2.0 - d) * kInvSqrt2;
      }
    }
  }
  return g;
}

std::vector<double> semigroup_axis_breaks(double center, double radius, const SemigroupSettings& s) {
  const double half = s.near_factor * radius, fine = s.near_panel * radius;
  const int nfine = std::max(2, static_cast<int>(std::ceil(2.0 * half / fine)));
  std::vector<double> right, left;
  double edge = center + half, w = 2.0 * half / nfine;
  const double hi = std::max(s.x_extent, edge + s.far_panel), lo = std::min(-s.x_extent, center - half - s.far_panel);
  while (edge < hi - 1e-12) {
    w = std::min(s.far_panel, w * 1.5);
    edge = std::min(hi, edge + w);
    right.push_back(edge);
  }
  edge = center - half;
  w = 2.0 * half / nfine;
  while (edge > lo + 1e-12) {
    w = std::min(s.far_panel, w * 1.5);
    edge = std::max(lo, edge - w);
    left.push_back(edge);
  }
  std::vector<double> out(left.rbegin(), left.rend());
  for (int p = 0; p <= nfine; ++p) out.push_back(center - half + 2.0 * half * p / nfine);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

SemigroupTransform::SemigroupTransform(RieszOrder order, JetFunction f, SemigroupSettings settings)
    : order_(std::move(order)), f_(std::move(f)), settings_(settings) {
  settings_.validate();
  const int n = order_.dim(), k = order_.order();
  if (n < 1 || n > 2) throw std::invalid_argument("semigroup transforms support n = 1 or 2");
  if (f_.support.dim() != n) throw std::invalid_argument("support/multi-index dimension mismatch");
  if (!(f_.support.radius > 0.0)) throw std::invalid_argument("support radius must be positive");
  if (!f_.jet) throw std::invalid_argument("missing jet callback");

  const double R = f_.support.radius;
  const double scale = f_.scale > 0.0 ? std::min(f_.scale, R) : R;
  const int panels_y =
      std::max(settings_.min_y_panels, static_cast<int>(std::ceil(2.0 * R / (settings_.y_panel * scale))));
  double hmax = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> br;
    for (int p = 0; p <= panels_y; ++p) br.push_back(f_.support.center(i) - R + 2.0 * R * p / panels_y);
    const auto rule = axis_rule(br, settings_.y_nodes);
    y_nodes_.push_back(to_vector(rule.nodes));
    y_weights_.push_back(to_vector(rule.weights));
    double prev = br.front();
    for (double v : rule.nodes) {
      hmax = std::max(hmax, v - prev);
      prev = v;
    }
    hmax = std::max(hmax, br.back() - prev);
  }

  const Eigen::Index n1 = y_nodes_[0].size(), n2 = n == 2 ? y_nodes_[1].size() : 1;
  g_.resize(n1, n2);
  Eigen::VectorXd y(n);
  for (Eigen::Index b = 0; b < n2; ++b) {
    for (Eigen::Index a = 0; a < n1; ++a) {
      y(0) = y_nodes_[0](a);
      if (n == 2) y(1) = y_nodes_[1](b);
      if ((y - f_.support.center).norm() >= R) {
        g_(a, b) = 0.0;
        continue;
      }
      g_(a, b) = riesz_derivative_jet(order_, f_.jet(y, k), y).value();
    }
  }
  if (order_.family() == Family::New) remove_low_moments();

  const double s0 = settings_.small_t_width * hmax;
  if (!(s0 < 0.5)) throw std::invalid_argument("support too wide for the small-time split; reduce y_panel");
  t0_ = -0.5 * std::log1p(-s0 * s0);
  rate_ = order_.family() == Family::Old ? k : 1.0 - k;
  const double inv_gamma = 1.0 / std::tgamma(0.5 * k);

  // int_0^{t0} t^j w(t) dt with t = tau^2
  const auto& g16 = cached_legendre(16);
  const double st0 = std::sqrt(t0_);
  for (int j = 0; j < settings_.taylor_terms; ++j) {
    double m = 0.0;
    for (int q = 0; q < g16.size(); ++q) {
      const double tau = 0.5 * st0 * (1.0 + g16.nodes(q));
      m += 0.5 * st0 * g16.weights(q) * 2.0 * std::pow(tau, 2 * j + k - 1) * std::exp(-rate_ * tau * tau);
    }
    moments_.push_back(m * inv_gamma);
  }

  const double u0 = std::log(t0_), u1 = std::log(settings_.t_split);
  const int panels = std::max(1, static_cast<int>(std::ceil((u1 - u0) / settings_.log_t_panel)));
  std::vector<double> br;
  for (int p = 0; p <= panels; ++p) br.push_back(u0 + (u1 - u0) * p / panels);
  const auto rule = composite_legendre(br, settings_.t_nodes);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = std::exp(rule.nodes[q]);
    t_.push_back(t);
    wt_.push_back(rule.weights[q] * t * std::pow(t, 0.5 * k - 1.0) * std::exp(-rate_ * t) * inv_gamma);
  }
  build_chaos();
}

Eigen::MatrixXd SemigroupTransform::hermite_table(const Eigen::VectorXd& x) const {
  const int K = settings_.chaos_degree;
  Eigen::MatrixXd H(x.size(), K + 1);
  std::vector<double> row(static_cast<std::size_t>(K + 1));
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    hermite_normalized_table<double>(K, x(a), row.data());
    for (int j = 0; j <= K; ++j) H(a, j) = row[static_cast<std::size_t>(j)];
  }
  return H;
}

void SemigroupTransform::build_chaos() {
  const int n = order_.dim(), k = order_.order(), K = settings_.chaos_degree;
  std::vector<Eigen::MatrixXd> P;
  for (int i = 0; i < n; ++i) {
    const auto& y = y_nodes_[static_cast<std::size_t>(i)];
    Eigen::MatrixXd Hi = hermite_table(y);
    for (Eigen::Index a = 0; a < y.size(); ++a) {
      Hi.row(a) *= y_weights_[static_cast<std::size_t>(i)](a) * std::exp(-y(a) * y(a)) / std::sqrt(std::numbers::pi);
    }
    P.push_back(std::move(Hi));
  }
  chaos_ = n == 1 ? Eigen::MatrixXd(P[0].transpose() * g_) : Eigen::MatrixXd(P[0].transpose() * g_ * P[1]);
  const double ts = settings_.t_split;
  for (Eigen::Index b = 0; b < chaos_.cols(); ++b) {
    for (Eigen::Index a = 0; a < chaos_.rows(); ++a) {
      const int deg = static_cast<int>(a + b);
      const double lambda = deg + rate_;
      if (deg > K || (order_.family() == Family::New && deg < k)) {
        chaos_(a, b) = 0.0;
        continue;
      }
      chaos_(a, b) *= std::pow(lambda, -0.5 * k) * gamma_q(0.5 * k, lambda * ts);
    }
  }
}

void SemigroupTransform::remove_low_moments() {
  const int n = order_.dim();
  const auto betas = indices_up_to_degree(n, order_.order() - 1);
  const Eigen::Index n1 = g_.rows(), n2 = g_.cols(), m = static_cast<Eigen::Index>(betas.size());
  Eigen::MatrixXd H(n1 * n2, m);
  Eigen::VectorXd w(n1 * n2), gv(n1 * n2);
  Eigen::VectorXd y(n);
  for (Eigen::Index b = 0; b < n2; ++b) {
    for (Eigen::Index a = 0; a < n1; ++a) {
      const Eigen::Index r = a + n1 * b;
      y(0) = y_nodes_[0](a);
      w(r) = y_weights_[0](a);
      if (n == 2) {
        y(1) = y_nodes_[1](b);
        w(r) *= y_weights_[1](b);
      }
      w(r) *= gamma_density(y);
      gv(r) = g_(a, b);
      for (Eigen::Index j = 0; j < m; ++j) H(r, j) = hermite_eval(betas[static_cast<std::size_t>(j)], y);
    }
  }
  const Eigen::MatrixXd gram = H.transpose() * w.asDiagonal() * H;
  const Eigen::VectorXd mom = H.transpose() * w.cwiseProduct(gv);
  gv -= H * gram.ldlt().solve(mom);
  g_ = Eigen::Map<const Eigen::MatrixXd>(gv.data(), n1, n2);
}

Eigen::MatrixXd SemigroupTransform::mehler_matrix(int axis, const Eigen::VectorXd& x, double t) const {
  const double e = std::exp(-t), s2 = -std::expm1(-2.0 * t);
  const double norm = 1.0 / std::sqrt(std::numbers::pi * s2);
  const auto& y = y_nodes_[static_cast<std::size_t>(axis)];
  const auto& w = y_weights_[static_cast<std::size_t>(axis)];
  Eigen::MatrixXd A(x.size(), y.size());
  for (Eigen::Index b = 0; b < y.size(); ++b) {
    for (Eigen::Index a = 0; a < x.size(); ++a) {
      const double d = y(b) - e * x(a);
      const double q = d * d / s2;
      A(a, b) = q > 745.0 ? 0.0 : w(b) * norm * std::exp(-q);
    }
  }
  return A;
}

double SemigroupTransform::small_t_part(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if ((x - f_.support.center).norm() >= f_.support.radius) return 0.0;
  const int m = settings_.taylor_terms;
  Jet g = riesz_derivative_jet(order_, f_.jet(x, order_.order() + 2 * (m - 1)), x);
  double s = 0.0, fact = 1.0;
  for (int j = 0; j < m; ++j) {
    if (j > 0) {
      g = apply_ou(g, x);
      fact *= j;
    }
    s += (j % 2 == 0 ? 1.0 : -1.0) * moments_[static_cast<std::size_t>(j)] / fact * g.value();
  }
  return s;
}

double SemigroupTransform::at(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != order_.dim()) throw std::invalid_argument("point dimension mismatch");
  double s = small_t_part(x);
  const Eigen::MatrixXd h1 = hermite_table(x.segment(0, 1));
  s += order_.dim() == 1 ? (h1 * chaos_).value() : (h1 * chaos_ * hermite_table(x.segment(1, 1)).transpose()).value();
  for (std::size_t q = 0; q < t_.size(); ++q) {
    const Eigen::MatrixXd a1 = mehler_matrix(0, x.segment(0, 1), t_[q]);
    if (order_.dim() == 1) {
      s += wt_[q] * (a1 * g_).value();
    } else {
      const Eigen::MatrixXd a2 = mehler_matrix(1, x.segment(1, 1), t_[q]);
      s += wt_[q] * (a1 * g_ * a2.transpose()).value();
    }
  }
  return s;
}

Eigen::VectorXd SemigroupTransform::at_many(const Eigen::Ref<const Eigen::MatrixXd>& points) const {
  Eigen::VectorXd out(points.cols());
  for (Eigen::Index j = 0; j < points.cols(); ++j) out(j) = at(points.col(j));
  return out;
}

Eigen::VectorXd SemigroupTransform::on_tensor(const std::vector<Eigen::VectorXd>& axes) const {
  const int n = order_.dim();
  if (static_cast<int>(axes.size()) != n) throw std::invalid_argument("need one axis per dimension");
  const Eigen::Index n1 = axes[0].size(), n2 = n == 2 ? axes[1].size() : 1;
  const Eigen::MatrixXd h1 = hermite_table(axes[0]);
  Eigen::MatrixXd acc = n == 1 ? Eigen::MatrixXd(h1 * chaos_) : Eigen::MatrixXd(h1 * chaos_ * hermite_table(axes[1]).transpose());
  for (std::size_t q = 0; q < t_.size(); ++q) {
    const Eigen::MatrixXd a1 = mehler_matrix(0, axes[0], t_[q]);
    if (n == 1) {
      acc.noalias() += wt_[q] * (a1 * g_);
    } else {
      const Eigen::MatrixXd a2 = mehler_matrix(1, axes[1], t_[q]);
      const Eigen::MatrixXd tmp = a1 * g_;
      acc.noalias() += wt_[q] * (tmp * a2.transpose());
    }
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index b = 0; b < n2; ++b) {
    for (Eigen::Index a = 0; a < n1; ++a) {
      x(0) = axes[0](a);
      if (n == 2) x(1) = axes[1](b);
      acc(a, b) += small_t_part(x);
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(acc.data(), acc.size());
}

L1Split riesz_l1_norm(const SemigroupTransform& tr, const Ball& ball, double near_radius) {
  const int n = tr.order().dim();
  std::vector<Eigen::VectorXd> axes, weights;
  const SemigroupSettings& s = tr.settings();
  for (int i = 0; i < n; ++i) {
    const auto rule = composite_legendre(semigroup_axis_breaks(ball.center(i), ball.radius, s), s.x_nodes);
    axes.push_back(to_vector(rule.nodes));
    weights.push_back(to_vector(rule.weights));
  }
  const Eigen::VectorXd v = tr.on_tensor(axes);
  L1Split out;
  const Eigen::Index n1 = axes[0].size(), n2 = n == 2 ? axes[1].size() : 1;
  Eigen::VectorXd x(n);
  for (Eigen::Index b = 0; b < n2; ++b) {
    for (Eigen::Index a = 0; a < n1; ++a) {
      x(0) = axes[0](a);
      double w = weights[0](a);
      if (n == 2) {
        x(1) = axes[1](b);
        w *= weights[1](b);
      }
      const double c = w * gamma_density(x) * std::abs(v(a + n1 * b));
      if ((x - ball.center).norm() < near_radius) {
        out.near += c;
      } else {
        out.far += c;
      }
    }
  }
  out.total = out.near + out.far;
  return out;
}

}  // namespace gaussriesz

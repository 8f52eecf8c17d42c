#include "gaussriesz/geometry.hpp"

#include <algorithm>

namespace gaussriesz {

double m_admissibility(double s) {
  if (s < 0.0) throw std::domain_error("m(s) needs s >= 0");
  return s <= 1.0 ? 1.0 : 1.0 / s;
}

AdmissibleBall::AdmissibleBall(Eigen::VectorXd center, double radius)
    : ball_{std::move(center), radius} {
  if (ball_.center.size() < 1 || ball_.center.size() > 3) {
    throw std::invalid_argument("ball dimension must be 1, 2 or 3");
  }
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  const double m = m_admissibility(ball_.center.norm());
  if (radius > m * (1.0 + 1e-12)) {
    throw std::invalid_argument("ball is not admissible: r_B > m(|c_B|)");
  }
}

double AdmissibleBall::r_By(const Eigen::Ref<const Eigen::VectorXd>& y) const {
  const double ny = y.norm();
  if (ny == 0.0) return std::numeric_limits<double>::infinity();
  return ball_.radius / (2.0 * ny);
}

SphereRule sphere_rule(int dim, int angular_nodes) {
  SphereRule s;
  if (dim == 1) {
    s.directions.resize(1, 2);
    s.directions << 1.0, -1.0;
    s.weights = Eigen::VectorXd::Ones(2);
    return s;
  }
  if (angular_nodes < 3) throw std::invalid_argument("need at least 3 angular nodes");
  const double two_pi = 2.0 * std::numbers::pi;
  if (dim == 2) {
    s.directions.resize(2, angular_nodes);
    s.weights = Eigen::VectorXd::Constant(angular_nodes, two_pi / angular_nodes);
    for (int j = 0; j < angular_nodes; ++j) {
      const double t = two_pi * (j + 0.5) / angular_nodes;
      s.directions(0, j) = std::cos(t);
      s.directions(1, j) = std::sin(t);
    }
    return s;
  }
  if (dim == 3) {
    const int nz = std::max(2, angular_nodes / 2);
    const auto& g = cached_legendre(nz);
    s.directions.resize(3, nz * angular_nodes);
    s.weights.resize(nz * angular_nodes);
    int idx = 0;
    for (int i = 0; i < nz; ++i) {
      const double z = g.nodes(i), rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < angular_nodes; ++j, ++idx) {
        const double t = two_pi * (j + 0.5) / angular_nodes;
        s.directions(0, idx) = rxy * std::cos(t);
        s.directions(1, idx) = rxy * std::sin(t);
        s.directions(2, idx) = z;
        s.weights(idx) = g.weights(i) * two_pi / angular_nodes;
      }
    }
    return s;
  }
  throw std::invalid_argument("sphere rule supports dimensions 1 to 3");
}

QuadratureGrid polar_patch(const Eigen::Ref<const Eigen::VectorXd>& center, const LineRule& radial,
                           const SphereRule& sphere) {
  const int n = static_cast<int>(center.size());
  const Eigen::Index nr = static_cast<Eigen::Index>(radial.nodes.size());
  const Eigen::Index na = sphere.weights.size();
  QuadratureGrid g;
  g.dim = n;
  g.region = Region::Ball;
  g.nodes.resize(n, nr * na);
  g.weights.resize(nr * na);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < nr; ++i) {
    const double rho = radial.nodes[static_cast<std::size_t>(i)];
    const double wr = radial.weights[static_cast<std::size_t>(i)] * std::pow(rho, n - 1);
    for (Eigen::Index j = 0; j < na; ++j, ++idx) {
      g.nodes.col(idx) = center + rho * sphere.directions.col(j);
      g.weights(idx) = wr * sphere.weights(j);
    }
  }
  return g;
}

void to_gaussian_weights(QuadratureGrid& grid) {
  for (Eigen::Index j = 0; j < grid.size(); ++j) grid.weights(j) *= gamma_density(grid.nodes.col(j));
}

QuadratureGrid full_space_grid(int dim, int nodes_per_axis) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid dimension must be 1, 2 or 3");
  const auto& gh = cached_hermite(nodes_per_axis);
  const int N = nodes_per_axis;
  Eigen::Index total = 1;
  for (int i = 0; i < dim; ++i) total *= N;
  QuadratureGrid g;
  g.dim = dim;
  g.region = Region::FullSpace;
  g.nodes.resize(dim, total);
  g.weights.resize(total);
  const double norm = std::pow(std::numbers::pi, -0.5 * dim);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    double w = norm;
    for (int i = 0; i < dim; ++i) {
      const int k = static_cast<int>(rem % N);
      rem /= N;
      g.nodes(i, idx) = gh.nodes(k);
      w *= gh.weights(k);
    }
    g.weights(idx) = w;
  }
  return g;
}

QuadratureGrid ball_grid(const Ball& ball, const GridSpec& spec) {
  const int scale = 1 << spec.refinement;
  const int panels = std::max(1, spec.radial_panels * scale);
  std::vector<double> bp;
  for (int p = 0; p <= panels; ++p) bp.push_back(ball.radius * p / panels);
  auto radial = composite_legendre(bp, spec.radial_nodes);
  auto g = polar_patch(ball.center, radial, sphere_rule(ball.dim(), spec.angular_nodes * scale));
  to_gaussian_weights(g);
  g.region = Region::Ball;
  return g;
}

std::vector<double> radial_breakpoints(double r_in, double r_out, int refinement) {
  const double h = 0.5 / (1 << refinement);
  const double ratio = refinement > 0 ? std::sqrt(2.0) : 2.0;
  std::vector<double> bp;
  if (r_in <= 0.0) {
    bp.push_back(0.0);
  } else if (r_in < h) {
    bp = geometric_breakpoints(r_in, h, ratio);
  } else {
    bp.push_back(r_in);
  }
  auto tail = uniform_breakpoints(bp.back(), r_out, h);
  bp.insert(bp.end(), tail.begin() + 1, tail.end());
  return bp;
}

QuadratureGrid complement_grid(const Ball& ball, const GridSpec& spec) {
  const double r_out = ball.center.norm() + 9.0;
  auto radial = composite_legendre(radial_breakpoints(ball.radius, std::max(r_out, 2.0 * ball.radius),
                                                      spec.refinement),
                                   spec.radial_nodes);
  const int scale = 1 << spec.refinement;
  auto g = polar_patch(ball.center, radial, sphere_rule(ball.dim(), spec.angular_nodes * scale));
  to_gaussian_weights(g);
  g.region = Region::BallComplement;
  return g;
}

double gamma_measure(const QuadratureGrid& grid) {
  if (grid.size() == 0) throw std::invalid_argument("empty quadrature grid");
  return grid.weights.sum();
}

double gamma_measure(const Ball& ball, const GridSpec& spec) {
  return gamma_measure(ball_grid(ball, spec));
}

double gamma_complement_measure(const Ball& ball, const GridSpec& spec) {
  return gamma_measure(complement_grid(ball, spec));
}

std::optional<double> doubling_ratio(const AdmissibleBall& ball, const GridSpec& spec) {
  const double g1 = gamma_measure(ball.ball(), spec);
  if (!(g1 > 1e-300)) return std::nullopt;
  return gamma_measure(ball.ball().scaled(2.0), spec) / g1;
}

}  // namespace gaussriesz

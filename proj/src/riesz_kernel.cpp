#include "gaussriesz/riesz_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gaussriesz/hermite.hpp"
#include "gaussriesz/quadrature.hpp"

namespace gaussriesz {

namespace {

constexpr double kSigmaSplit = 0.86602540378443864676;  // sqrt(1 - 1/4)
constexpr double kExpFloor = -740.0;
constexpr double kDecayMargin = 60.0;

double ipow(double b, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// L^{m/2} for integer m.
double half_power(double L, int m) {
  const int a = m < 0 ? -m : m;
  double p = ipow(L, a / 2);
  if (a % 2) p *= std::sqrt(L);
  return m < 0 ? 1.0 / p : p;
}

double herm(int m, double t) {
  switch (m) {
    case 0: return 1.0;
    case 1: return 2.0 * t;
    case 2: return 4.0 * t * t - 2.0;
    case 3: return t * (8.0 * t * t - 12.0);
    default: return hermite_eval_1d(m, t);
  }
}

struct Core {
  int n = 1;
  int k = 1;
  std::array<int, 3> a{};
  KernelFamily family = KernelFamily::Old;
  int l_twice = 0;      // exponent of -log r, doubled
  double prefactor = 1.0;
};

Core make_core(const KernelSpec& spec) {
  spec.validate();
  Core c;
  c.n = spec.dim();
  c.k = spec.order();
  for (int i = 0; i < c.n; ++i) c.a[static_cast<std::size_t>(i)] = spec.alpha[i];
  c.family = spec.family;
  c.prefactor = spec.normalization;
  if (spec.family == KernelFamily::HalfPowerDerivative) {
    c.l_twice = -(c.k + 2);
    c.prefactor *= std::pow(2.0, -0.5 * c.k) * std::pow(std::numbers::pi, -0.5 * c.n) / std::tgamma(-0.5 * c.k);
  } else {
    c.l_twice = c.k - 2;
  }
  return c;
}

// Integrand of the r-integral without dr.
double integrand(const Core& c, const double* x, const double* y, double xx_minus_yy, double r, double sig2,
                 double L, double& min_decay) {
  const double inv = 1.0 / std::sqrt(sig2);
  double v2 = 0.0, H = 1.0;
  for (int i = 0; i < c.n; ++i) {
    const double v = c.family == KernelFamily::New ? (x[i] - r * y[i]) * inv : (y[i] - r * x[i]) * inv;
    v2 += v * v;
    H *= herm(c.a[static_cast<std::size_t>(i)], v);
  }
  double E = -v2;
  if (c.family == KernelFamily::New) E += xx_minus_yy;
  min_decay = std::min(min_decay, -E);
  if (E < kExpFloor) return 0.0;
  double val = H * std::exp(E) * ipow(inv, c.n + c.k) * half_power(L, c.l_twice);
  if (c.family != KernelFamily::New) val *= ipow(r, c.k - 1);
  return val;
}

std::vector<double> lower_breakpoints(double t_max, int refinement) {
  std::vector<double> b{std::numbers::ln2};
  while (b.back() < t_max) b.push_back(std::min(t_max, 2.0 * b.back()));
  for (int level = 0; level < refinement; ++level) {
    std::vector<double> fine{b.front()};
    for (std::size_t i = 1; i < b.size(); ++i) {
      fine.push_back(0.5 * (b[i - 1] + b[i]));
      fine.push_back(b[i]);
    }
    b = std::move(fine);
  }
  return b;
}

double raw_kernel(const Core& c, const double* x, const double* y, const KernelQuadrature& q) {
  double d2 = 0.0, xx = 0.0, yy = 0.0;
  for (int i = 0; i < c.n; ++i) {
    const double d = x[i] - y[i];
    d2 += d * d;
    xx += x[i] * x[i];
    yy += y[i] * y[i];
  }
  const double ell = std::sqrt(d2);
  const double xy = xx - yy;
  const auto& g = cached_legendre(q.nodes_per_panel);
  const int m = q.nodes_per_panel;

  double min_decay = std::numeric_limits<double>::infinity();

  // r in (0, 1/2] through t = -log r
  double lower = 0.0;
  const double t_max = c.family == KernelFamily::New ? q.t_max : q.t_max / c.k;
  const auto tb = lower_breakpoints(std::max(t_max, 2.0 * std::numbers::ln2), q.refinement);
  for (std::size_t p = 1; p < tb.size(); ++p) {
    const double mid = 0.5 * (tb[p] + tb[p - 1]), half = 0.5 * (tb[p] - tb[p - 1]);
    for (int j = 0; j < m; ++j) {
      const double t = mid + half * g.nodes(j);
      const double r = std::exp(-t);
      const double sig2 = -std::expm1(-2.0 * t);
      lower += g.weights(j) * half * r * integrand(c, x, y, xy, r, sig2, t, min_decay);
    }
  }

  // r in [1/2, 1) through u = log s, s = ell / sigma; panels narrow to ds <= 2h once s > 1 and stop
  // when the exponent bound (s - sigma|x|)^2 is far below the largest term seen
  double upper = 0.0;
  const double xnorm = std::sqrt(xx);
  const double u_lo = std::log(ell / kSigmaSplit);
  const double u_hi = std::max(std::log(q.s_max), u_lo + std::numbers::ln2);
  const double h = q.log_s_panel / static_cast<double>(1 << q.refinement);
  for (double a = u_lo; a < u_hi;) {
    const double b = std::min(u_hi, a + h * std::min(1.0, 2.0 * std::exp(-a)));
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int j = 0; j < m; ++j) {
      const double u = mid + half * g.nodes(j);
      const double sig = ell * std::exp(-u);
      const double sig2 = sig * sig;
      const double r = std::sqrt((1.0 - sig) * (1.0 + sig));
      const double L = -0.5 * std::log1p(-sig2);
      upper += g.weights(j) * half * (sig2 / r) * integrand(c, x, y, xy, r, sig2, L, min_decay);
    }
    a = b;
    const double s = std::exp(b);
    const double gap = std::max(0.0, s - ell / s * xnorm);
    if (gap * gap > min_decay + kDecayMargin) break;
  }
  return c.prefactor * (lower + upper);
}

void check_points(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& q) {
  if (x.size() != spec.dim() || y.size() != spec.dim()) {
    throw std::invalid_argument("point/multi-index dimension mismatch");
  }
  if (q.nodes_per_panel < 1 || !(q.log_s_panel > 0.0) || !(q.s_max > 1.0) || !(q.t_max > 1.0) || q.refinement < 0) {
    throw std::invalid_argument("invalid kernel quadrature settings");
  }
  if ((x - y).norm() < q.min_separation) {
    throw std::domain_error("kernel evaluated on the diagonal; use the principal-value path");
  }
}

double eval_checked(const KernelSpec& spec, KernelFamily expected, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& q) {
  if (spec.family != expected) throw std::invalid_argument("kernel family does not match the call");
  const Core c = make_core(spec);
  check_points(spec, x, y, q);
  return raw_kernel(c, x.data(), y.data(), q);
}

// Radial breakpoints with panel width at most the current radius.
void append_breaks(std::vector<double>& b, double end, double far_panel) {
  while (b.back() < end * (1.0 - 1e-14)) {
    b.push_back(std::min(end, b.back() + std::min(far_panel, b.back())));
  }
}

}  // namespace

KernelFamily kernel_family(Family f) { return f == Family::Old ? KernelFamily::Old : KernelFamily::New; }

void KernelSpec::validate() const {
  const int k = alpha.order();
  if (k < 1) throw std::invalid_argument("kernel needs |alpha| >= 1");
  if (alpha.dim() > 3) throw std::invalid_argument("kernel supports dimensions 1 to 3");
  if (family == KernelFamily::HalfPowerDerivative && k % 2 == 0) {
    throw std::invalid_argument("half-power derivative kernel needs odd |alpha|");
  }
  if (!std::isfinite(normalization)) throw std::invalid_argument("kernel normalization must be finite");
}

SSubstitution s_substitution(double l, double s) {
  if (!(l > 0.0) || !(s > l)) throw std::domain_error("s-substitution needs 0 < l < s");
  const double sig = l / s;
  const double r = std::sqrt((1.0 - sig) * (1.0 + sig));
  return {r, l * l / (s * s * s * r)};
}

double lambda_alpha(int k, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("lambda_alpha needs r in (0,1)");
  if (k == 2) return 1.0;
  return std::pow(-std::log(r) / ((1.0 - r) * (1.0 + r)), 0.5 * k - 1.0);
}

double analytic_normalization(int n, int k) {
  return std::pow(2.0, -0.5 * k) * std::pow(std::numbers::pi, -0.5 * n) / std::tgamma(0.5 * k);
}

double kernel_old(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& quad) {
  return eval_checked(spec, KernelFamily::Old, x, y, quad);
}

double kernel_new(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                  const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& quad) {
  return eval_checked(spec, KernelFamily::New, x, y, quad);
}

double kernel_halfpower_derivative(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                                   const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& quad) {
  return eval_checked(spec, KernelFamily::HalfPowerDerivative, x, y, quad);
}

double kernel_value(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y, const KernelQuadrature& quad) {
  return eval_checked(spec, spec.family, x, y, quad);
}

FAlphaEval F_alpha(const MultiIndex& alpha, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y, double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::domain_error("F_alpha needs r in (0,1)");
  const int n = alpha.dim();
  if (x.size() != n || y.size() != n) throw std::invalid_argument("point/multi-index dimension mismatch");
  const double sig = std::sqrt((1.0 - r) * (1.0 + r));
  const Eigen::VectorXd u = (x - r * y) / sig;
  const double e = std::exp(-u.squaredNorm());
  std::vector<double> h(static_cast<std::size_t>(n)), hm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    h[static_cast<std::size_t>(i)] = herm(alpha[i], u(i));
    hm[static_cast<std::size_t>(i)] = alpha[i] > 0 ? herm(alpha[i] - 1, u(i)) : 0.0;
  }
  FAlphaEval out;
  double H = 1.0;
  for (double v : h) H *= v;
  out.value = H * e;
  out.grad_y.resize(n);
  for (int i = 0; i < n; ++i) {
    double lowered = alpha[i] * hm[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) {
      if (j != i) lowered *= h[static_cast<std::size_t>(j)];
    }
    out.grad_y(i) = -(2.0 * r / sig) * (lowered - u(i) * H) * e;
  }
  return out;
}

Eigen::VectorXd grad_y_F(const MultiIndex& alpha, const Eigen::Ref<const Eigen::VectorXd>& x,
                         const Eigen::Ref<const Eigen::VectorXd>& y, double r) {
  return F_alpha(alpha, x, y, r).grad_y;
}

double gradient_bound_constant(const MultiIndex& alpha, double margin) {
  const int n = alpha.dim();
  if (n < 1 || n > 3) throw std::invalid_argument("gradient bound supports dimensions 1 to 3");
  const int m = n == 1 ? 4001 : n == 2 ? 401 : 81;
  const double lim = 10.0, step = 2.0 * lim / (m - 1);
  double sup = 0.0;
  std::array<int, 3> idx{0, 0, 0};
  const long total = n == 1 ? m : n == 2 ? static_cast<long>(m) * m : static_cast<long>(m) * m * m;
  std::array<double, 3> u{}, h{}, hm{};
  for (long q = 0; q < total; ++q) {
    long rem = q;
    double u2 = 0.0;
    for (int i = 0; i < n; ++i) {
      idx[static_cast<std::size_t>(i)] = static_cast<int>(rem % m);
      rem /= m;
      const auto ui = static_cast<std::size_t>(i);
      u[ui] = -lim + step * idx[ui];
      u2 += u[ui] * u[ui];
      h[ui] = herm(alpha[i], u[ui]);
      hm[ui] = alpha[i] > 0 ? herm(alpha[i] - 1, u[ui]) : 0.0;
    }
    double H = 1.0;
    for (int i = 0; i < n; ++i) H *= h[static_cast<std::size_t>(i)];
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double lowered = alpha[i] * hm[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        if (j != i) lowered *= h[static_cast<std::size_t>(j)];
      }
      const double v = lowered - u[static_cast<std::size_t>(i)] * H;
      norm2 += v * v;
    }
    sup = std::max(sup, std::sqrt(norm2) * std::exp(-0.5 * u2));
  }
  return 2.0 * sup * margin;
}

void PVConfig::validate() const {
  if (!(eps_inner > 0.0) || !(eps_outer > eps_inner)) throw std::invalid_argument("PV needs eps_outer > eps_inner > 0");
  if (eps_inner < 1e3 * r_quad.min_separation) {
    throw std::invalid_argument("eps_inner too close to the diagonal for the kernel quadrature");
  }
  if (radial_nodes < 1 || angular_nodes < 3 || !(far_panel > 0.0) || !(tolerance > 0.0)) {
    throw std::invalid_argument("invalid PV quadrature settings");
  }
}

double kernel_y_integral(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
  spec.validate();
  if (x.size() != spec.dim()) throw std::invalid_argument("point/multi-index dimension mismatch");
  if (spec.family == KernelFamily::Old) return 0.0;
  if (spec.family == KernelFamily::HalfPowerDerivative) {
    throw std::invalid_argument("half-power kernel has no local term");
  }
  return std::pow(std::numbers::pi, 0.5 * spec.dim()) * std::tgamma(0.5 * spec.order()) * hermite_eval(spec.alpha, x);
}

PVStencil build_pv_stencil(const KernelSpec& spec, const Ball& support, const Eigen::Ref<const Eigen::VectorXd>& x,
                           const PVConfig& pv) {
  pv.validate();
  const Core core = make_core(spec);
  const int n = spec.dim();
  if (x.size() != n || support.dim() != n) throw std::invalid_argument("point/multi-index dimension mismatch");

  PVStencil st;
  st.x = x;
  const double dc = (x - support.center).norm();
  st.excluded = dc < support.radius;
  const auto& g = cached_legendre(pv.radial_nodes);
  const SphereRule sphere = sphere_rule(n, pv.angular_nodes);
  const Eigen::Index na = sphere.weights.size();

  // Polar rule around x (excluded) or around the support center (plain).
  std::vector<double> breaks;
  std::size_t inner_panels = 0;
  Eigen::VectorXd origin = x;
  if (st.excluded) {
    const double reach = std::max(dc + support.radius, 2.0 * x.norm() + 7.0);
    breaks = {pv.eps_inner, pv.eps_outer};
    inner_panels = 1;
    append_breaks(breaks, reach, pv.far_panel);
    if (spec.family != KernelFamily::HalfPowerDerivative) st.local = spec.normalization * kernel_y_integral(spec, x);
  } else {
    origin = support.center;
    const double R = support.radius, gap = std::max(dc - R, pv.eps_inner);
    const double width = std::min(pv.far_panel, 0.25 * R);
    breaks = {0.0};
    std::vector<double> tail;
    for (double d = gap; d < width; d *= 2.0) tail.push_back(R - d);
    const double bulk_end = tail.empty() ? R : R - width;
    while (breaks.back() < bulk_end * (1.0 - 1e-14)) breaks.push_back(std::min(bulk_end, breaks.back() + width));
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) breaks.push_back(*it);
    breaks.push_back(R);
  }

  const Eigen::Index nr = static_cast<Eigen::Index>((breaks.size() - 1) * static_cast<std::size_t>(pv.radial_nodes));
  st.nodes.resize(n, nr * na);
  st.w_coarse.resize(nr * na);
  st.w_fine.resize(nr * na);
  Eigen::Index idx = 0;
  for (std::size_t p = 1; p < breaks.size(); ++p) {
    const bool inner = p <= inner_panels;
    const double mid = 0.5 * (breaks[p] + breaks[p - 1]), half = 0.5 * (breaks[p] - breaks[p - 1]);
    for (int j = 0; j < pv.radial_nodes; ++j) {
      const double rho = mid + half * g.nodes(j);
      const double wr = g.weights(j) * half * ipow(rho, n - 1);
      for (Eigen::Index a = 0; a < na; ++a, ++idx) {
        st.nodes.col(idx) = origin + rho * sphere.directions.col(a);
        const double w = wr * sphere.weights(a) * raw_kernel(core, x.data(), st.nodes.col(idx).data(), pv.r_quad);
        st.w_fine(idx) = w;
        st.w_coarse(idx) = inner ? 0.0 : w;
      }
    }
  }
  return st;
}

PVResult apply_stencil(const PVStencil& st, const Eigen::Ref<const Eigen::VectorXd>& f_nodes, double f_x,
                       const PVConfig& pv) {
  if (f_nodes.size() != st.w_fine.size()) throw std::invalid_argument("stencil/value size mismatch");
  PVResult res;
  res.excluded = st.excluded;
  const double shift = st.excluded ? f_x : 0.0;
  double coarse = 0.0, fine = 0.0, scale = std::abs(f_x);
  for (Eigen::Index j = 0; j < f_nodes.size(); ++j) {
    const double d = f_nodes(j) - shift;
    coarse += st.w_coarse(j) * d;
    fine += st.w_fine(j) * d;
    scale = std::max(scale, std::abs(f_nodes(j)));
  }
  const double local = st.excluded ? f_x * st.local : 0.0;
  res.coarse = coarse + local;
  res.fine = fine + local;
  if (st.excluded) {
    res.value = (pv.eps_outer * res.fine - pv.eps_inner * res.coarse) / (pv.eps_outer - pv.eps_inner);
  } else {
    res.value = res.fine;
  }
  scale = std::max(scale, std::abs(res.value));
  res.reliable = std::abs(res.coarse - res.fine) <= 10.0 * pv.tolerance * scale;
  return res;
}

PVResult apply_riesz_pv(const KernelSpec& spec, const CompactFunction& f, const Eigen::Ref<const Eigen::VectorXd>& x,
                        const PVConfig& pv) {
  const PVStencil st = build_pv_stencil(spec, f.support, x, pv);
  Eigen::VectorXd vals(st.nodes.cols());
  for (Eigen::Index j = 0; j < vals.size(); ++j) vals(j) = f.f(st.nodes.col(j));
  const double fx = st.excluded ? f.f(x) : 0.0;
  return apply_stencil(st, vals, fx, pv);
}

}  // namespace gaussriesz

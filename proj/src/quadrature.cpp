#include "gaussriesz/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace gaussriesz {

namespace {

template <typename Make>
const GaussRule<double>& cached(std::map<int, std::unique_ptr<GaussRule<double>>>& cache,
                                std::mutex& mu, int n, Make make) {
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule<double>>(make(n));
  return *slot;
}

}  // namespace

const GaussRule<double>& cached_legendre(int n) {
  static std::map<int, std::unique_ptr<GaussRule<double>>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, [](int m) { return gauss_legendre_rule<double>(m); });
}

const GaussRule<double>& cached_hermite(int n) {
  static std::map<int, std::unique_ptr<GaussRule<double>>> cache;
  static std::mutex mu;
  return cached(cache, mu, n, [](int m) { return gauss_hermite_rule<double>(m); });
}

LineRule composite_legendre(const std::vector<double>& breakpoints, int nodes_per_panel) {
  const auto& g = cached_legendre(nodes_per_panel);
  LineRule rule;
  if (breakpoints.size() < 2) return rule;
  rule.nodes.reserve((breakpoints.size() - 1) * static_cast<std::size_t>(nodes_per_panel));
  rule.weights.reserve(rule.nodes.capacity());
  for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
    const double a = breakpoints[p], b = breakpoints[p + 1];
    if (!(b > a)) continue;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int i = 0; i < g.size(); ++i) {
      rule.nodes.push_back(mid + half * g.nodes(i));
      rule.weights.push_back(half * g.weights(i));
    }
  }
  return rule;
}

std::vector<double> geometric_breakpoints(double a, double b, double ratio) {
  if (!(a > 0.0) || !(ratio > 1.0)) throw std::invalid_argument("geometric breakpoints need a > 0, ratio > 1");
  std::vector<double> bp{a};
  if (!(b > a)) return bp;
  double x = a * ratio;
  while (x < b / std::sqrt(ratio)) {
    bp.push_back(x);
    x *= ratio;
  }
  bp.push_back(b);
  return bp;
}

std::vector<double> uniform_breakpoints(double a, double b, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("panel width must be positive");
  std::vector<double> bp{a};
  if (!(b > a)) return bp;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
  for (int i = 1; i < panels; ++i) bp.push_back(a + (b - a) * i / panels);
  bp.push_back(b);
  return bp;
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw std::domain_error("gamma_q needs a > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  const double lead = std::exp(a * std::log(x) - x - std::lgamma(a));
  constexpr double tiny = 1e-300, eps = 1e-16;
  if (x < a + 1.0) {
    double term = 1.0 / a, sum = term;
    for (int j = 1; j < 1000; ++j) {
      term *= x / (a + j);
      sum += term;
      if (std::abs(term) < eps * std::abs(sum)) break;
    }
    return 1.0 - lead * sum;
  }
  // modified Lentz on the continued fraction
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int j = 1; j < 1000; ++j) {
    const double an = -j * (j - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) break;
  }
  return lead * h;
}

}  // namespace gaussriesz

#include "gaussriesz/jets.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gaussriesz {

namespace {

std::mutex& layout_mutex() {
  static std::mutex m;
  return m;
}

void same_shape(const Jet& a, const Jet& b) {
  if (&a.layout() != &b.layout()) throw std::invalid_argument("jets of different dimension or order");
}

int total(const std::array<int, 3>& e) { return e[0] + e[1] + e[2]; }

}  // namespace

int JetLayout::index(int e0, int e1, int e2) const {
  if (e0 < 0 || e1 < 0 || e2 < 0 || e0 + e1 + e2 > order) return -1;
  const int s = order + 1;
  return lookup[static_cast<std::size_t>(e0 + s * (e1 + s * e2))];
}

std::shared_ptr<const JetLayout> JetLayout::get(int dim, int order) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("jets support dimensions 1 to 3");
  if (order < 0 || order > 16) throw std::invalid_argument("jet order out of range");
  static std::map<int, std::shared_ptr<const JetLayout>> cache;
  std::lock_guard lock(layout_mutex());
  auto& slot = cache[dim * 100 + order];
  if (!slot) {
    auto L = std::make_shared<JetLayout>();
    L->dim = dim;
    L->order = order;
    const int s = order + 1;
    L->lookup.assign(static_cast<std::size_t>(s * s * s), -1);
    for (const auto& beta : indices_up_to_degree(dim, order)) {
      std::array<int, 3> e{0, 0, 0};
      for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i)] = beta[i];
      L->lookup[static_cast<std::size_t>(e[0] + s * (e[1] + s * e[2]))] = static_cast<int>(L->exps.size());
      L->exps.push_back(e);
      L->factorials.push_back(beta.factorial());
    }
    for (std::size_t i = 0; i < L->exps.size(); ++i) {
      for (std::size_t j = 0; j < L->exps.size(); ++j) {
        const auto& a = L->exps[i];
        const auto& b = L->exps[j];
        if (total(a) + total(b) > order) continue;
        L->products.push_back(
            {static_cast<int>(i), static_cast<int>(j), L->index(a[0] + b[0], a[1] + b[1], a[2] + b[2])});
      }
    }
    slot = std::move(L);
  }
  return slot;
}

Jet::Jet(int dim, int order) : layout_(JetLayout::get(dim, order)), c_(layout_->exps.size(), 0.0) {}

Jet Jet::constant(int dim, int order, double v) {
  Jet j(dim, order);
  j.c_[0] = v;
  return j;
}

Jet Jet::variable(int dim, int order, int i, double value) {
  if (i < 0 || i >= dim) throw std::out_of_range("jet variable index");
  Jet j = constant(dim, order, value);
  if (order >= 1) {
    std::array<int, 3> e{0, 0, 0};
    e[static_cast<std::size_t>(i)] = 1;
    j.c_[static_cast<std::size_t>(j.layout_->index(e[0], e[1], e[2]))] = 1.0;
  }
  return j;
}

double Jet::coeff(const MultiIndex& beta) const {
  if (beta.dim() != dim()) throw std::invalid_argument("multi-index/jet dimension mismatch");
  if (beta.order() > order()) throw std::out_of_range("multi-index above jet order");
  std::array<int, 3> e{0, 0, 0};
  for (int i = 0; i < dim(); ++i) e[static_cast<std::size_t>(i)] = beta[i];
  return c_[static_cast<std::size_t>(layout_->index(e[0], e[1], e[2]))];
}

double Jet::derivative(const MultiIndex& beta) const { return coeff(beta) * beta.factorial(); }

Jet& Jet::operator+=(const Jet& o) {
  same_shape(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  same_shape(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet Jet::truncated(int order) const {
  Jet out(dim(), order);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& e = out.layout_->exps[i];
    out.c_[i] = c_[static_cast<std::size_t>(layout_->index(e[0], e[1], e[2]))];
  }
  return out;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }

Jet operator*(const Jet& a, const Jet& b) {
  same_shape(a, b);
  Jet out(a.dim(), a.order());
  for (const auto& t : a.layout().products) {
    out[static_cast<std::size_t>(t[2])] += a[static_cast<std::size_t>(t[0])] * b[static_cast<std::size_t>(t[1])];
  }
  return out;
}

Jet compose(const Jet& a, const std::vector<double>& taylor) {
  if (taylor.empty()) throw std::invalid_argument("compose needs Taylor coefficients");
  Jet d = a;
  d[0] = 0.0;
  const int p = std::min<int>(a.order(), static_cast<int>(taylor.size()) - 1);
  Jet r = Jet::constant(a.dim(), a.order(), taylor[static_cast<std::size_t>(p)]);
  for (int j = p - 1; j >= 0; --j) {
    r = r * d;
    r[0] += taylor[static_cast<std::size_t>(j)];
  }
  return r;
}

Jet exp(const Jet& a) {
  std::vector<double> t(static_cast<std::size_t>(a.order() + 1));
  double v = std::exp(a.value());
  for (std::size_t j = 0; j < t.size(); ++j) {
    t[j] = v;
    v /= static_cast<double>(j + 1);
  }
  return compose(a, t);
}

Jet reciprocal(const Jet& a) {
  if (a.value() == 0.0) throw std::domain_error("reciprocal of a jet with zero value");
  std::vector<double> t(static_cast<std::size_t>(a.order() + 1));
  const double inv = 1.0 / a.value();
  double v = inv;
  for (std::size_t j = 0; j < t.size(); ++j) {
    t[j] = v;
    v *= -inv;
  }
  return compose(a, t);
}

Jet partial(const Jet& a, int i) {
  if (i < 0 || i >= a.dim()) throw std::out_of_range("partial derivative index");
  if (a.order() < 1) throw std::invalid_argument("partial needs order >= 1");
  const auto& L = a.layout();
  Jet out(a.dim(), a.order() - 1);
  const auto& OL = out.layout();
  for (std::size_t q = 0; q < out.size(); ++q) {
    auto e = OL.exps[q];
    const int ei = e[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(i)] += 1;
    out[q] = (ei + 1) * a[static_cast<std::size_t>(L.index(e[0], e[1], e[2]))];
  }
  return out;
}

Jet apply_ou(const Jet& a, const Eigen::Ref<const Eigen::VectorXd>& x0) {
  if (a.order() < 2) throw std::invalid_argument("apply_ou needs order >= 2");
  if (x0.size() != a.dim()) throw std::invalid_argument("base point/jet dimension mismatch");
  const auto& L = a.layout();
  Jet out(a.dim(), a.order() - 2);
  const auto& OL = out.layout();
  for (std::size_t q = 0; q < out.size(); ++q) {
    const auto& e = OL.exps[q];
    double v = total(e) * a[static_cast<std::size_t>(L.index(e[0], e[1], e[2]))];
    for (int i = 0; i < a.dim(); ++i) {
      const auto ui = static_cast<std::size_t>(i);
      auto e1 = e, e2 = e;
      e1[ui] += 1;
      e2[ui] += 2;
      v += x0(i) * (e[ui] + 1) * a[static_cast<std::size_t>(L.index(e1[0], e1[1], e1[2]))];
      v -= 0.5 * (e[ui] + 2) * (e[ui] + 1) * a[static_cast<std::size_t>(L.index(e2[0], e2[1], e2[2]))];
    }
    out[q] = v;
  }
  return out;
}

std::vector<Jet> coordinate_jets(const Eigen::Ref<const Eigen::VectorXd>& x0, int order) {
  const int n = static_cast<int>(x0.size());
  std::vector<Jet> out;
  for (int i = 0; i < n; ++i) out.push_back(Jet::variable(n, order, i, x0(i)));
  return out;
}

Jet bump_jet(const Eigen::Ref<const Eigen::VectorXd>& center, double radius,
             const Eigen::Ref<const Eigen::VectorXd>& x0, int order) {
  const int n = static_cast<int>(x0.size());
  if (center.size() != n) throw std::invalid_argument("bump center/point dimension mismatch");
  if (!(radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
  Jet w = Jet::constant(n, order, 1.0);
  const double inv = 1.0 / (radius * radius);
  for (int i = 0; i < n; ++i) {
    Jet d = Jet::variable(n, order, i, x0(i) - center(i));
    w -= (d * d) * inv;
  }
  // exp(-1/w) and all its derivatives underflow well before w reaches 0
  if (w.value() <= 1.0 / 700.0) return Jet(n, order);
  return exp(reciprocal(w) * -1.0);
}

}  // namespace gaussriesz

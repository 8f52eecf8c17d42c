#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>
#include <type_traits>

#include "gaussriesz/multiindex.hpp"

namespace gaussriesz {

namespace detail {
// Double evaluations accumulate in extended precision.
template <typename Scalar>
using HermiteAcc = std::conditional_t<std::is_same_v<Scalar, double>, long double, Scalar>;
}  // namespace detail

// Physicists' recurrence is used up to this degree per coordinate.
inline constexpr int kMaxPhysicistsDegree = 60;
// Orthonormal recurrence stays bounded and is allowed much further.
inline constexpr int kMaxNormalizedDegree = 1000;

// Physicists' Hermite polynomial H_m(t).
template <typename Scalar>
Scalar hermite_eval_1d(int m, Scalar t) {
  if (m < 0 || m > kMaxPhysicistsDegree) {
    throw std::out_of_range("Hermite degree outside [0, 60]");
  }
  Scalar prev = Scalar(1);
  if (m == 0) return prev;
  Scalar cur = Scalar(2) * t;
  for (int j = 1; j < m; ++j) {
    Scalar next = Scalar(2) * t * cur - Scalar(2 * j) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// h_0..h_{max_degree} at t, orthonormal in L^2(gamma):
// h_{m+1} = (sqrt(2) t h_m - sqrt(m) h_{m-1}) / sqrt(m+1).
template <typename Scalar>
void hermite_normalized_table(int max_degree, Scalar t, Scalar* out) {
  if (max_degree < 0 || max_degree > kMaxNormalizedDegree) {
    throw std::out_of_range("normalized Hermite degree out of range");
  }
  using Acc = detail::HermiteAcc<Scalar>;
  using std::sqrt;
  out[0] = Scalar(1);
  if (max_degree == 0) return;
  const Acc s2 = sqrt(Acc(2)), ta = Acc(t);
  Acc prev = Acc(1), cur = s2 * ta;
  out[1] = Scalar(cur);
  for (int m = 1; m < max_degree; ++m) {
    const Acc next = (s2 * ta * cur - sqrt(Acc(m)) * prev) / sqrt(Acc(m + 1));
    prev = cur;
    cur = next;
    out[m + 1] = Scalar(cur);
  }
}

template <typename Scalar>
Scalar hermite_normalized_1d(int m, Scalar t) {
  if (m < 0 || m > kMaxNormalizedDegree) {
    throw std::out_of_range("normalized Hermite degree out of range");
  }
  using Acc = detail::HermiteAcc<Scalar>;
  using std::sqrt;
  if (m == 0) return Scalar(1);
  const Acc s2 = sqrt(Acc(2)), ta = Acc(t);
  Acc prev = Acc(1), cur = s2 * ta;
  for (int j = 1; j < m; ++j) {
    const Acc next = (s2 * ta * cur - sqrt(Acc(j)) * prev) / sqrt(Acc(j + 1));
    prev = cur;
    cur = next;
  }
  return Scalar(cur);
}

// sqrt(2^|alpha| alpha!)
inline double hermite_norm_factor(const MultiIndex& alpha) {
  return std::sqrt(std::ldexp(alpha.factorial(), alpha.order()));
}

// H_alpha(u) = prod_i H_{alpha_i}(u_i)
template <typename Derived>
typename Derived::Scalar hermite_eval(const MultiIndex& alpha,
                                      const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  if (u.size() != alpha.dim()) throw std::invalid_argument("point/multi-index dimension mismatch");
  Scalar v = Scalar(1);
  for (int i = 0; i < alpha.dim(); ++i) v *= hermite_eval_1d<Scalar>(alpha[i], u(i));
  return v;
}

// h_alpha(u) = H_alpha(u) / sqrt(2^|alpha| alpha!)
template <typename Derived>
typename Derived::Scalar hermite_normalized(const MultiIndex& alpha,
                                            const Eigen::MatrixBase<Derived>& u) {
  using Scalar = typename Derived::Scalar;
  if (u.size() != alpha.dim()) throw std::invalid_argument("point/multi-index dimension mismatch");
  Scalar v = Scalar(1);
  for (int i = 0; i < alpha.dim(); ++i) v *= hermite_normalized_1d<Scalar>(alpha[i], u(i));
  return v;
}

}  // namespace gaussriesz

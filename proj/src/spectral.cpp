#include "gaussriesz/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gaussriesz/hermite.hpp"

namespace gaussriesz {

double SpectralMultiplier::factor(int degree) const {
  if (shift != 0 && shift != 1) throw std::invalid_argument("multiplier shift must be 0 or 1");
  const int base = degree + shift;
  if (base == 0) return exponent > 0.0 ? 0.0 : (exponent == 0.0 ? 1.0 : 0.0);
  return std::pow(static_cast<double>(base), exponent);
}

HermiteCoeffs project(int j, const HermiteCoeffs& f) {
  if (j < 0) throw std::invalid_argument("chaos order must be >= 0");
  HermiteCoeffs out(f.dim());
  for (const auto& [beta, c] : f) {
    if (beta.order() == j) out.set(beta, c);
  }
  return out;
}

HermiteCoeffs pi0(const HermiteCoeffs& f) {
  HermiteCoeffs out(f.dim());
  for (const auto& [beta, c] : f) {
    if (beta.order() != 0) out.set(beta, c);
  }
  return out;
}

HermiteCoeffs apply_power(const SpectralMultiplier& mult, const HermiteCoeffs& f) {
  HermiteCoeffs out(f.dim());
  for (const auto& [beta, c] : f) {
    if (mult.shift == 0 && beta.order() == 0) continue;
    out.set(beta, mult.factor(beta.order()) * c);
  }
  return out;
}

HermiteCoeffs hermite_project(const QuadratureGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& values,
                              int max_degree) {
  if (values.size() != grid.size()) throw std::invalid_argument("value count does not match grid");
  const int n = grid.dim;
  const auto betas = indices_up_to_degree(n, max_degree);
  std::vector<double> acc(betas.size(), 0.0);
  std::vector<double> table(static_cast<std::size_t>(n * (max_degree + 1)));
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const double wv = grid.weights(j) * values(j);
    if (wv == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      hermite_normalized_table(max_degree, grid.nodes(i, j), table.data() + i * (max_degree + 1));
    }
    for (std::size_t b = 0; b < betas.size(); ++b) {
      double v = wv;
      for (int i = 0; i < n; ++i) v *= table[static_cast<std::size_t>(i * (max_degree + 1) + betas[b][i])];
      acc[b] += v;
    }
  }
  HermiteCoeffs out(n);
  for (std::size_t b = 0; b < betas.size(); ++b) out.set(betas[b], acc[b]);
  return out;
}

}  // namespace gaussriesz

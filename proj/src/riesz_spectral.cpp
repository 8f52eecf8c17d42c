#include "gaussriesz/riesz_spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace gaussriesz {

std::string to_string(Family f) { return f == Family::Old ? "old" : "new"; }

Family parse_family(const std::string& text) {
  if (text == "old") return Family::Old;
  if (text == "new") return Family::New;
  throw std::invalid_argument("family must be 'old' or 'new', got '" + text + "'");
}

RieszOrder::RieszOrder(MultiIndex alpha, Family family) : alpha_(std::move(alpha)), family_(family) {
  if (alpha_.order() < 1) throw std::invalid_argument("Riesz order needs |alpha| >= 1");
}

double RieszOrder::multiplier(const MultiIndex& beta) const {
  const int k = order();
  if (family_ == Family::Old) {
    if (beta.order() == 0 || !beta.dominates(alpha_)) return 0.0;
    // sqrt(prod beta_i!/(beta_i - alpha_i)!) as a running product
    double ladder = 1.0;
    for (int i = 0; i < beta.dim(); ++i) {
      for (int j = 0; j < alpha_[i]; ++j) ladder *= static_cast<double>(beta[i] - j);
    }
    return std::sqrt(ladder) * std::pow(static_cast<double>(beta.order()), -0.5 * k);
  }
  double ladder = 1.0;
  for (int i = 0; i < beta.dim(); ++i) {
    for (int j = 1; j <= alpha_[i]; ++j) ladder *= static_cast<double>(beta[i] + j);
  }
  return std::sqrt(ladder) * std::pow(static_cast<double>(beta.order() + 1), -0.5 * k);
}

HermiteCoeffs riesz_old(const RieszOrder& order, const HermiteCoeffs& f) {
  if (order.family() != Family::Old) throw std::invalid_argument("riesz_old needs the old family");
  if (order.dim() != f.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  HermiteCoeffs out(f.dim());
  for (const auto& [beta, c] : f) {
    const double m = order.multiplier(beta);
    if (m != 0.0) out.add(beta - order.alpha(), m * c);
  }
  return out;
}

HermiteCoeffs riesz_new(const RieszOrder& order, const HermiteCoeffs& f) {
  if (order.family() != Family::New) throw std::invalid_argument("riesz_new needs the new family");
  if (order.dim() != f.dim()) throw std::invalid_argument("multi-index dimension mismatch");
  HermiteCoeffs out(f.dim());
  for (const auto& [beta, c] : f) out.add(beta + order.alpha(), order.multiplier(beta) * c);
  return out;
}

HermiteCoeffs riesz_apply(const RieszOrder& order, const HermiteCoeffs& f) {
  return order.family() == Family::Old ? riesz_old(order, f) : riesz_new(order, f);
}

double riesz_apply_pointwise(const RieszOrder& order, const HermiteCoeffs& f,
                             const Eigen::Ref<const Eigen::VectorXd>& x) {
  const HermiteCoeffs image = riesz_apply(order, f);
  if (image.max_degree() > kPointwiseDegreeCap) {
    throw std::out_of_range("image degree exceeds the pointwise evaluation cap");
  }
  return image.evaluate(x);
}

}  // namespace gaussriesz

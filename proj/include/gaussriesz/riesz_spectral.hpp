#pragma once

#include <Eigen/Core>
#include <string>

#include "gaussriesz/hermite_coeffs.hpp"

namespace gaussriesz {

enum class Family { Old, New };

std::string to_string(Family f);
Family parse_family(const std::string& text);

// R_alpha = D^alpha L^{-k/2} (old) or R*_alpha = D*^alpha (L+I)^{-k/2} (new), k = |alpha| >= 1.
class RieszOrder {
 public:
  RieszOrder(MultiIndex alpha, Family family);

  const MultiIndex& alpha() const { return alpha_; }
  Family family() const { return family_; }
  int order() const { return alpha_.order(); }
  int dim() const { return alpha_.dim(); }

  // Coefficient of h_{target(beta)} produced from h_beta; 0 when annihilated.
  double multiplier(const MultiIndex& beta) const;

 private:
  MultiIndex alpha_;
  Family family_;
};

HermiteCoeffs riesz_old(const RieszOrder& order, const HermiteCoeffs& f);
HermiteCoeffs riesz_new(const RieszOrder& order, const HermiteCoeffs& f);
HermiteCoeffs riesz_apply(const RieszOrder& order, const HermiteCoeffs& f);

// Image degree cap for pointwise evaluation.
inline constexpr int kPointwiseDegreeCap = 400;

double riesz_apply_pointwise(const RieszOrder& order, const HermiteCoeffs& f,
                             const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace gaussriesz

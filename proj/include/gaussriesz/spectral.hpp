#pragma once

#include <Eigen/Core>

#include "gaussriesz/geometry.hpp"
#include "gaussriesz/hermite_coeffs.hpp"

namespace gaussriesz {

// Multiplier (|beta| + shift)^z on h_beta. shift = 0 gives L^z, shift = 1 gives (L+I)^z.
struct SpectralMultiplier {
  double exponent = 1.0;
  int shift = 0;

  double factor(int degree) const;
};

inline SpectralMultiplier ou_power(double z) { return {z, 0}; }
inline SpectralMultiplier shifted_ou_power(double z) { return {z, 1}; }

// Chaos projection P_j.
HermiteCoeffs project(int j, const HermiteCoeffs& f);
// Pi_0 = I - P_0.
HermiteCoeffs pi0(const HermiteCoeffs& f);
// For shift 0 and z < 0 the constant term is annihilated.
HermiteCoeffs apply_power(const SpectralMultiplier& mult, const HermiteCoeffs& f);

// Coefficients <f, h_beta> for |beta| <= max_degree from samples of f on a
// grid whose weights integrate against the Gaussian measure.
HermiteCoeffs hermite_project(const QuadratureGrid& grid, const Eigen::Ref<const Eigen::VectorXd>& values,
                              int max_degree);

}  // namespace gaussriesz

#pragma once

#include <cmath>

namespace gaussriesz {

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
inline double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// 1 on [0, inner], 0 on [outer, inf), smooth in between.
inline double plateau(double rho, double inner, double outer) {
  return 1.0 - smooth_step((rho - inner) / (outer - inner));
}

}  // namespace gaussriesz

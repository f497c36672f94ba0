#pragma once

#include <vector>

namespace imlab {

inline constexpr int kDefaultQuadratureOrder = 64;
inline constexpr int kMinQuadratureOrder = 16;

/// Gauss-Hermite rule for the standard normal weight: sum_j w_j f(z_j)
/// approximates E[f(Z)], Z ~ N(0, 1). Weights sum to one.
struct QuadratureRule {
  int order = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Newton iteration on the orthonormal Hermite recurrence in extended
  /// precision, then the change of variable z = sqrt(2) x, w = w_H / sqrt(pi).
  static QuadratureRule gauss_hermite(int order);
};

/// Order from the IMLAB_QUAD_ORDER environment variable, else 64.
int default_quadrature_order();

} // namespace imlab

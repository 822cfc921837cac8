#pragma once

#include <vector>

namespace hoss {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// q-point Gauss-Legendre rule on [0, 1]; exact for polynomials of degree <= 2q - 1.
QuadratureRule gauss_legendre_unit(int q);

/// Smallest q whose rule integrates degree `degree` exactly.
inline int gauss_points_for_degree(int degree) { return degree <= 1 ? 1 : (degree + 2) / 2; }

}  // namespace hoss

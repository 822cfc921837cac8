#pragma once

#include "hoss/mpoly.hpp"

namespace hoss {

/// One coordinate of a multivariate divided difference: i + 1 nodes
/// (repetitions allowed) acting on z_var.
struct DivDiffCoord {
  int var = 0;  ///< zero-based coordinate
  std::vector<Complex> nodes;

  int order() const { return static_cast<int>(nodes.size()) - 1; }
};

/// Product of coordinate divided differences, coordinates strictly increasing.
struct DividedDiffSpec {
  std::vector<DivDiffCoord> coords;

  int total_order() const;
  /// Per-variable orders (i_l at var j_l, zero elsewhere).
  MultiIndex order_index(int n_vars) const;
  /// Throws StructuralError unless coordinates increase, lie in range and i_l >= 1.
  void validate(int n_vars) const;
};

/// Complete homogeneous sums h_0 .. h_dmax of the nodes, by the recurrence
/// h_d(x_0..x_r) = h_d(x_0..x_{r-1}) + x_r h_{d-1}(x_0..x_r).
std::vector<Complex> complete_homogeneous(int dmax, std::span<const Complex> nodes);

/// p[x_0, ..., x_k] for p given by ascending coefficients. Repeated nodes are
/// resolved in the divided-difference table by derivatives of p.
Complex divdiff_univariate(std::span<const Complex> coeffs, std::span<const Complex> nodes);

/// Divided difference of z^k: the remaining monomial in untouched variables
/// scaled by prod_l h_{k_{j_l} - i_l}(nodes_l); zero if some k_{j_l} < i_l.
MultiPoly divdiff_monomial(const MultiIndex& k, const DividedDiffSpec& spec);

/// Linear extension of divdiff_monomial over the support of f.
MultiPoly divdiff_apply(const MultiPoly& f, const DividedDiffSpec& spec);

/// The single-coordinate operator D_{j^i}, evaluated through the recursive table.
MultiPoly divdiff_coordinate(const MultiPoly& f, const DivDiffCoord& coord);

/// Applies the coordinate operators of spec one at a time in the given order
/// (indices into spec.coords; empty means spec order).
MultiPoly divdiff_recursive(const MultiPoly& f, const DividedDiffSpec& spec,
                            std::span<const int> application_order = {});

/// Nested simplex integral of the m-th partial derivative of f against the
/// affine node interpolation, at point z (touched coordinates of z are ignored).
/// nodes_per_axis <= 0 picks the exact Gauss-Legendre count for f.
Complex divdiff_integral(const MultiPoly& f, const DividedDiffSpec& spec,
                         std::span<const Complex> z, int nodes_per_axis = 0);

int exact_divdiff_nodes(const MultiPoly& f);

/// (1 / prod i_l!) * coeff_upper of the m-th partial derivative.
double divdiff_bound(const MultiPoly& f, const DividedDiffSpec& spec, const DomainKind& dom);

}  // namespace hoss

#pragma once

#include "hoss/opderiv.hpp"

namespace hoss {

/// f(B) - sum_{k<m} (1/k!) d^k/ds^k f(X(s)) at s = 0, the k = 0 term being f(A).
CMatrix taylor_remainder(const MultiPoly& f, const PerturbationPath& path, int m);

/// Gauss-Legendre value of int_0^1 (1-t)^{m-1}/(m-1)! tr(d^m/ds^m f(X(s))|_{s=t}) dt.
/// The node count makes the rule exact for the polynomial integrand.
Complex remainder_trace_integral(const MultiPoly& f, const PerturbationPath& path, int m);

int remainder_quadrature_nodes(const MultiPoly& f);

struct RemainderReport {
  int m = 0;
  Complex lhs_trace;     ///< tr of the Taylor remainder
  Complex rhs_integral;  ///< quadrature of the weighted derivative trace
  double abs_gap = 0.0;
  int quadrature_nodes = 0;
  bool in_hypothesis = true;  ///< false when the path is not commuting
  bool passed = false;        ///< abs_gap <= tol (1 + |lhs|)
};

RemainderReport remainder_check(const MultiPoly& f, const PerturbationPath& path, int m,
                                double tol = 1e-9);

}  // namespace hoss

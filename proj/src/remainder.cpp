#include "hoss/remainder.hpp"

#include <algorithm>
#include <cmath>

#include "hoss/quadrature.hpp"

namespace hoss {

CMatrix taylor_remainder(const MultiPoly& f, const PerturbationPath& path, int m) {
  if (m < 1) throw StructuralError("taylor_remainder: m must be >= 1");
  if (f.n_vars() != path.n()) throw StructuralError("taylor_remainder: arity mismatch");
  CMatrix r = eval_operator(f, path.b);
  double fact = 1.0;
  for (int k = 0; k < m; ++k) {
    if (k > 0) fact *= k;
    if (k > std::max(0, f.total_degree())) break;
    r -= full_derivative(f, path, k, 0.0) / fact;
  }
  return r;
}

int remainder_quadrature_nodes(const MultiPoly& f) {
  return std::max(1, (std::max(0, f.total_degree()) + 2) / 2);
}

Complex remainder_trace_integral(const MultiPoly& f, const PerturbationPath& path, int m) {
  if (m < 1) throw StructuralError("remainder_trace_integral: m must be >= 1");
  if (f.n_vars() != path.n()) throw StructuralError("remainder_trace_integral: arity mismatch");
  if (m > f.total_degree()) return 0.0;
  double fact = 1.0;
  for (int s = 2; s < m; ++s) fact *= s;
  const QuadratureRule rule = gauss_legendre_unit(remainder_quadrature_nodes(f));
  Complex acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double t = rule.nodes[q];
    const double w = rule.weights[q] * std::pow(1.0 - t, m - 1) / fact;
    acc += w * trace(full_derivative(f, path, m, t));
  }
  return acc;
}

RemainderReport remainder_check(const MultiPoly& f, const PerturbationPath& path, int m, double tol) {
  RemainderReport rep;
  rep.m = m;
  rep.lhs_trace = trace(taylor_remainder(f, path, m));
  rep.rhs_integral = remainder_trace_integral(f, path, m);
  rep.abs_gap = std::abs(rep.lhs_trace - rep.rhs_integral);
  rep.quadrature_nodes = remainder_quadrature_nodes(f);
  rep.in_hypothesis = within_hypotheses(path);
  rep.passed = rep.abs_gap <= tol * (1.0 + std::abs(rep.lhs_trace));
  return rep;
}

}  // namespace hoss

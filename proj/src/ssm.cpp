#include "hoss/ssm.hpp"

#include <cmath>

#include "hoss/quadrature.hpp"

namespace hoss {

double total_variation_bound(const DerivTermSpec& term, const PerturbationPath& path) {
  double b = 1.0;
  int m = 0;
  for (const auto& c : term.coords) {
    b *= std::pow(hilbert_schmidt_norm(path.v.at(c.var)), c.order);
    for (int s = 0; s < c.order; ++s) b /= ++m;
  }
  return b;
}

Complex phi(const DerivTermSpec& term, const MultiPoly& g, const PerturbationPath& path, int nodes) {
  if (g.n_vars() != path.n()) throw StructuralError("phi: arity mismatch");
  term.validate(g.n_vars());
  if (g.is_zero()) return 0.0;
  const int m = term.total_order();
  const MultiPoly f = antiderivative(g, term.order_index(g.n_vars()));
  const int q = nodes > 0 ? nodes : gauss_points_for_degree(m - 1 + g.total_degree());
  const QuadratureRule rule = gauss_legendre_unit(q);
  double fact = 1.0;
  for (int s = 2; s < m; ++s) fact *= s;
  Complex acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = rule.nodes[i];
    acc += rule.weights[i] * std::pow(1.0 - t, m - 1) / fact * trace(d_term(f, path, term, t));
  }
  return acc;
}

SsmFunctional::SsmFunctional(DerivTermSpec term, std::shared_ptr<const PerturbationPath> path,
                             int quadrature_order)
    : term_(std::move(term)), path_(std::move(path)), quadrature_order_(quadrature_order) {
  if (!path_) throw StructuralError("SsmFunctional: null path");
  term_.validate(path_->n());
}

Complex SsmFunctional::operator()(const MultiPoly& g) const {
  // never integrate below the exactness threshold of g
  const int exact = gauss_points_for_degree(term_.total_order() - 1 + std::max(0, g.total_degree()));
  return phi(term_, g, *path_, std::max(quadrature_order_, exact));
}

MomentTable moment_table(const DerivTermSpec& term, const PerturbationPath& path, const MultiIndex& max_degree) {
  const int n = path.n();
  if (static_cast<int>(max_degree.size()) != n) throw StructuralError("moment_table: max_degree length differs");
  term.validate(n);
  MomentTable table;
  table.term = term;
  table.m = term.total_order();
  table.tv_bound = total_variation_bound(term, path);
  MultiIndex a(n, 0);
  for (int e : max_degree)
    if (e < 0) return table;
  while (true) {
    table.entries[a] = phi(term, MultiPoly::monomial(a), path);
    int pos = n - 1;
    while (pos >= 0 && ++a[pos] > max_degree[pos]) a[pos--] = 0;
    if (pos < 0) break;
  }
  return table;
}

int moment_table_violations(const MomentTable& table, double slack, double radius) {
  int bad = 0;
  for (const auto& [a, value] : table.entries) {
    int total = 0;
    for (int e : a) total += e;
    if (std::abs(value) > table.tv_bound * std::pow(radius, total) * (1.0 + slack) + 1e-14) ++bad;
  }
  return bad;
}

TraceFormulaReport trace_formula_check(const MultiPoly& f, const PerturbationPath& path, int m, double tol) {
  if (m < 1) throw StructuralError("trace_formula_check: m must be >= 1");
  TraceFormulaReport rep;
  rep.m = m;
  rep.lhs = trace(taylor_remainder(f, path, m));
  std::vector<Complex> parts;
  for (const auto& term : derivative_terms(f.n_vars(), m)) {
    const MultiPoly g = partial_derivative(f, term.order_index(f.n_vars()));
    parts.push_back(term.multinomial_weight() * phi(term, g, path));
    ++rep.terms;
  }
  // same pairwise shape as the matrix reduction
  while (parts.size() > 1) {
    std::vector<Complex> next;
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) next.push_back(parts[i] + parts[i + 1]);
    if (parts.size() % 2) next.push_back(parts.back());
    parts = std::move(next);
  }
  rep.rhs = parts.empty() ? Complex{} : parts.front();
  rep.abs_gap = std::abs(rep.lhs - rep.rhs);
  rep.in_hypothesis = within_hypotheses(path);
  rep.passed = rep.abs_gap <= tol * (1.0 + std::abs(rep.lhs));
  return rep;
}

ReductionReport single_variable_reduction(const MultiPoly& g, int j, int m, const PerturbationPath& path,
                                          double tol) {
  if (g.n_vars() != 1) throw StructuralError("single_variable_reduction: g must be univariate");
  if (j < 0 || j >= path.n()) throw StructuralError("single_variable_reduction: coordinate out of range");
  if (m < 1) throw StructuralError("single_variable_reduction: m must be >= 1");
  ReductionReport rep;
  DerivTermSpec term;
  term.coords.push_back({j, m});
  rep.phi_value = phi(term, embed_univariate(g, path.n(), j), path);

  const MultiPoly big_f = antiderivative(g, MultiIndex{m});
  Tolerances loose;
  loose.max_dim = static_cast<int>(std::max<Eigen::Index>(path.dim(), 1));
  const PerturbationPath single = build_path(certify_tuple({path.a.mats[j]}, loose),
                                             certify_tuple({path.b.mats[j]}, loose), loose);
  rep.remainder_trace = trace(taylor_remainder(big_f, single, m));
  rep.abs_gap = std::abs(rep.phi_value - rep.remainder_trace);
  rep.passed = rep.abs_gap <= tol * (1.0 + std::abs(rep.remainder_trace));
  return rep;
}

}  // namespace hoss

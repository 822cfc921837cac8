#pragma once

#include <memory>

#include "hoss/remainder.hpp"

namespace hoss {

/// Functional values of one spectral shift measure: entries[a] = phi(z^a).
struct MomentTable {
  DerivTermSpec term;
  int m = 0;
  double tv_bound = 0.0;  ///< (1/m!) prod ||V_{j_l}||_2^{i_l}
  std::map<MultiIndex, Complex> entries;
};

/// (1/m!) prod ||V_{j_l}||_2^{i_l}
double total_variation_bound(const DerivTermSpec& term, const PerturbationPath& path);

/// phi_term(g) = int_0^1 (1-t)^{m-1}/(m-1)! tr D_f^{term}(t) dt where f is the
/// zero-constant antiderivative of g of order term. nodes <= 0 picks the exact count.
Complex phi(const DerivTermSpec& term, const MultiPoly& g, const PerturbationPath& path, int nodes = 0);

/// phi_term bound to one path.
class SsmFunctional {
 public:
  SsmFunctional(DerivTermSpec term, std::shared_ptr<const PerturbationPath> path, int quadrature_order = 0);

  Complex operator()(const MultiPoly& g) const;
  const DerivTermSpec& term() const { return term_; }
  int quadrature_order() const { return quadrature_order_; }

 private:
  DerivTermSpec term_;
  std::shared_ptr<const PerturbationPath> path_;
  int quadrature_order_;
};

/// All a <= max_degree componentwise.
MomentTable moment_table(const DerivTermSpec& term, const PerturbationPath& path, const MultiIndex& max_degree);

/// Number of entries with |phi(z^a)| > tv_bound * sup|z^a| * (1 + slack), with
/// sup|z^a| = r^{|a|} on the polydisc of the given radius.
int moment_table_violations(const MomentTable& table, double slack = 1e-8, double radius = 1.0);

struct TraceFormulaReport {
  int m = 0;
  Complex lhs;  ///< tr of the Taylor remainder
  Complex rhs;  ///< sum of weight * phi_term(d^term f)
  double abs_gap = 0.0;
  int terms = 0;
  bool in_hypothesis = true;
  bool passed = false;
};

TraceFormulaReport trace_formula_check(const MultiPoly& f, const PerturbationPath& path, int m,
                                       double tol = 1e-9);

struct ReductionReport {
  Complex phi_value;
  Complex remainder_trace;  ///< from the one-variable path (A_j, B_j)
  double abs_gap = 0.0;
  bool passed = false;
};

/// Compares phi_{j^m}(g) with tr[F(B_j) - sum_{k<m} (1/k!) d^k F(A_j + sV_j)]
/// where F^{(m)} = g, the latter computed on the one-variable path.
ReductionReport single_variable_reduction(const MultiPoly& g, int j, int m, const PerturbationPath& path,
                                          double tol = 1e-10);

}  // namespace hoss

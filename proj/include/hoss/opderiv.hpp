#pragma once

#include <algorithm>
#include <functional>
#include <string>

#include "hoss/mpoly.hpp"

namespace hoss {

/// Derivative order i at zero-based coordinate var.
struct TermCoord {
  int var = 0;
  int order = 1;
  friend bool operator==(const TermCoord&, const TermCoord&) = default;
};

/// Shape (j_1^{i_1}, ..., j_k^{i_k}) of one derivative term; also the index of
/// one spectral shift functional.
struct DerivTermSpec {
  std::vector<TermCoord> coords;

  int total_order() const;
  MultiIndex order_index(int n_vars) const;
  /// m! / (i_1! ... i_k!)
  double multinomial_weight() const;
  void validate(int n_vars) const;

  /// "1^2,3^1" with one-based coordinates.
  std::string to_string() const;
  friend bool operator==(const DerivTermSpec&, const DerivTermSpec&) = default;
};

/// Parses the comma-separated `j^i` grammar (one-based j, strictly increasing,
/// i >= 1, whitespace ignored). Throws StructuralError on malformed input.
DerivTermSpec parse_term(const std::string& text);

/// All terms of total order m in n variables, ordered by k, then the j's, then
/// the i's. max_k <= 0 means no limit on the number of coordinates.
std::vector<DerivTermSpec> derivative_terms(int n_vars, int m, int max_k = 0);

using Composition = std::vector<int>;

/// Weak compositions of total into `parts` non-negative parts, lexicographic.
std::vector<Composition> compositions(int total, int parts);
void for_each_composition(int total, int parts, const std::function<void(const Composition&)>& visit);

/// d^n/ds^n (H + sV)^p at s = t:
/// n! sum_{p_0+..+p_n = p-n} X^{p_0} V X^{p_1} V ... V X^{p_n}, X = H + tV.
CMatrix power_derivative(const CMatrix& h, const CMatrix& v, int p, int n, double t);

/// The term D_f^{j_1^{i_1},...,j_k^{i_k}}(t): for every monomial the factors are
/// taken in coordinate order, with X_j(t)^{k_j} replaced by the i_l-th
/// derivative of (A_j + sV_j)^{k_j} at touched coordinates.
CMatrix d_term(const MultiPoly& f, const PerturbationPath& path, const DerivTermSpec& term, double t);

/// d^m/ds^m f(X(s)) at s = t; m = 0 gives f(X(t)).
CMatrix full_derivative(const MultiPoly& f, const PerturbationPath& path, int m, double t);

/// True when the derivative formulas are backed by commuting paths.
inline bool within_hypotheses(const PerturbationPath& path) { return path.path_valid; }

/// sum_j (-1)^j C(m,j) F(t + (m/2 - j) h) / h^m with F(s) = f(X(s)).
CMatrix finite_difference(const MultiPoly& f, const PerturbationPath& path, int m, double t, double h);

/// Richardson extrapolation of central differences at h, h/2, ..., h/2^(levels-1).
CMatrix richardson_difference(const MultiPoly& f, const PerturbationPath& path, int m, double t,
                              double h, int levels = 3);

/// Default step per derivative order.
double default_fd_step(int m);

/// Levels after which Richardson extrapolation of the m-th central difference
/// is exact for a polynomial curve of the given degree (the error series in h^2
/// has floor((degree - m) / 2) terms).
inline int exact_richardson_levels(int degree, int m) { return 1 + std::max(0, (degree - m) / 2); }

}  // namespace hoss

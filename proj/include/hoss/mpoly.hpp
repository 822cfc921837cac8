#pragma once

#include <map>
#include <string>

#include "hoss/matcore.hpp"

namespace hoss {

/// Finite-support power series sum_k c_k z^k in n variables.
///
/// Terms live in a lexicographically ordered map and zero coefficients are
/// never stored, so two equal polynomials have identical term maps.
class MultiPoly {
 public:
  using TermMap = std::map<MultiIndex, Complex>;

  MultiPoly() = default;
  explicit MultiPoly(int n_vars);

  static MultiPoly constant(int n_vars, Complex c);
  static MultiPoly monomial(MultiIndex k, Complex c = 1.0);

  int n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Complex coeff(const MultiIndex& k) const;
  /// Adds c to the coefficient of z^k, dropping the term if it cancels to 0.
  void add_term(const MultiIndex& k, Complex c);

  /// Largest exponent of z_j over the support (-1 for the zero polynomial).
  int max_degree(int j) const;
  int total_degree() const;
  MultiIndex max_degrees() const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(Complex s);

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(Complex s, MultiPoly a) { return a *= s; }
  friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

 private:
  void check_index(const MultiIndex& k) const;

  int n_vars_ = 0;
  TermMap terms_;
};

enum class Domain { Torus, Cube };

/// Sample grid over Omega^n used for sup-norm estimation.
struct DomainKind {
  Domain kind = Domain::Torus;
  int grid_per_axis = 64;
  double radius = 1.0;  ///< polydisc radius; only the Torus grid is scaled

  static DomainKind torus(int grid = 64, double radius = 1.0) {
    return {Domain::Torus, grid, radius};
  }
  static DomainKind cube(int grid = 65) { return {Domain::Cube, grid, 1.0}; }

  /// Next grid in the nested refinement sequence (64 -> 128, 65 -> 129).
  DomainKind refined() const;
  std::vector<Complex> axis_samples() const;
};

Complex eval_scalar(const MultiPoly& f, std::span<const Complex> z);

/// sum_k c_k X_1^{k_1} ... X_n^{k_n}.
CMatrix eval_operator(const MultiPoly& f, std::span<const CMatrix> mats);
inline CMatrix eval_operator(const MultiPoly& f, const CommutingTuple& tuple) {
  return eval_operator(f, std::span<const CMatrix>(tuple.mats));
}

MultiPoly partial_derivative(const MultiPoly& f, const MultiIndex& order);

/// The zero-constant g with partial_derivative(g, order) == f.
MultiPoly antiderivative(const MultiPoly& f, const MultiIndex& order);

/// Lifts a polynomial in one variable to z_j of an n-variable polynomial.
MultiPoly embed_univariate(const MultiPoly& g, int n_vars, int j);

struct SupNorm {
  double grid_sup = 0.0;     ///< max |f| on the grid, a lower bound
  double coeff_upper = 0.0;  ///< sum |c_k| r^{|k|}, an upper bound on the polydisc
};

SupNorm sup_norm(const MultiPoly& f, const DomainKind& dom);

/// Only the (cheap) coefficient bound.
double coeff_upper(const MultiPoly& f, double radius = 1.0);

/// Max |f| over the tensor grid of dom, evaluated by mode products.
double grid_sup(const MultiPoly& f, const DomainKind& dom);

enum class CheckStatus { Pass, Fail, Refused };
std::string to_string(CheckStatus s);

struct VonNeumannReport {
  CheckStatus status = CheckStatus::Refused;
  double lhs = 0.0;  ///< ||f(X)||_op
  double grid_sup = 0.0;
  double coeff_upper = 0.0;
  int grid_used = 0;
  std::string note;
};

/// ||f(X)|| <= sup_{Omega^n} |f| for a commuting normal contraction tuple.
/// Grid is doubled up to max_grid while the grid side fails within slack.
VonNeumannReport von_neumann_check(const MultiPoly& f, const CommutingTuple& tuple,
                                   DomainKind dom, double slack = 1e-8,
                                   int max_grid = 512);

/// Total sample budget; grid refinement stops before exceeding it.
inline constexpr long long kMaxGridPoints = 1LL << 22;

}  // namespace hoss

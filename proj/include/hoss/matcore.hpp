#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace hoss {

using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Dense square complex matrix. Carrier of every operator computation.
using CMatrix = Matrix<Complex>;

/// Exponent vector of a monomial z_1^{k_1} ... z_n^{k_n}.
using MultiIndex = std::vector<int>;

/// Thrown on shape, arity or other structural mismatches.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Tolerances {
  double ctol = 1e-10;  ///< commutation / normality, scale-normalised
  double ntol = 1e-10;  ///< contraction slack on the operator norm
  int path_grid = 33;   ///< uniform t-grid for contraction along a path
  int max_dim = 64;     ///< larger inputs are rejected as structural errors
};

// ---------------------------------------------------------------------------
// Expression-friendly norms and traces.

template <typename Derived>
typename Derived::Scalar trace(const Eigen::MatrixBase<Derived>& m) {
  return m.trace();
}

/// Singular values in decreasing order.
template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& m) {
  Eigen::JacobiSVD<Matrix<typename Derived::Scalar>> svd(m.eval());
  return svd.singularValues();
}

template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

/// (sum sigma_i^p)^(1/p). p = +inf gives the operator norm.
template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& m, double p) {
  if (!(p >= 1.0)) throw std::domain_error("schatten_norm: p must be >= 1");
  if (std::isinf(p)) return op_norm(m);
  if (p == 2.0) return m.norm();
  const Eigen::VectorXd s = singular_values(m);
  if (p == 1.0) return s.sum();
  // scale by the largest value to keep the power sum in range
  const double top = s.size() ? s(0) : 0.0;
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

template <typename Derived>
double hilbert_schmidt_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

template <typename DerivedA, typename DerivedB>
double commutator_norm(const Eigen::MatrixBase<DerivedA>& a,
                       const Eigen::MatrixBase<DerivedB>& b) {
  return op_norm((a * b - b * a).eval());
}

/// X^e by binary exponentiation.
CMatrix matrix_power(const CMatrix& x, int e);

bool all_finite(const CMatrix& m);

// ---------------------------------------------------------------------------

/// n pairwise-commuting matrices together with their certification data.
struct CommutingTuple {
  std::vector<CMatrix> mats;
  double comm_residual = 0.0;  ///< max_{i<j} ||X_i X_j - X_j X_i||_op
  bool is_commuting = true;    ///< residual within ctol * max(1, max ||X||^2)
  bool is_contraction = true;
  bool is_normal = true;
  bool is_self_adjoint = true;

  int n() const { return static_cast<int>(mats.size()); }
  Eigen::Index dim() const { return mats.empty() ? 0 : mats.front().rows(); }
};

/// Computes every certification field. Throws StructuralError when the
/// matrices are not square or of unequal size.
CommutingTuple certify_tuple(std::vector<CMatrix> mats, const Tolerances& tol = {});

/// Linear path X_j(t) = A_j + t V_j with V_j = B_j - A_j.
struct PerturbationPath {
  CommutingTuple a;
  CommutingTuple b;
  std::vector<CMatrix> v;
  double comm_residual = 0.0;      ///< over {A_j} u {B_j} u {V_j}
  bool path_valid = true;          ///< X(t) commutes for every t
  bool contractive = true;         ///< ||X_j(t)|| <= 1 + ntol on the grid
  bool normal_endpoints = true;

  int n() const { return a.n(); }
  Eigen::Index dim() const { return a.dim(); }

  std::vector<CMatrix> at(double t) const;
};

PerturbationPath build_path(const CommutingTuple& a, const CommutingTuple& b,
                            const Tolerances& tol = {});

/// X_1^{k_1} ... X_n^{k_n}, factors multiplied left to right.
CMatrix ordered_monomial(std::span<const CMatrix> mats, const MultiIndex& k);

inline CMatrix ordered_monomial(const CommutingTuple& tuple, const MultiIndex& k) {
  return ordered_monomial(std::span<const CMatrix>(tuple.mats), k);
}

/// Fixed-order pairwise summation (tree shape depends only on the count).
CMatrix pairwise_sum(std::vector<CMatrix> terms, Eigen::Index dim);

}  // namespace hoss

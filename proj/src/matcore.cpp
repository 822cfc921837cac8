#include "hoss/matcore.hpp"

#include <algorithm>
#include <string>

namespace hoss {

CMatrix matrix_power(const CMatrix& x, int e) {
  if (e < 0) throw std::domain_error("matrix_power: negative exponent");
  CMatrix result = CMatrix::Identity(x.rows(), x.cols());
  if (e == 0) return result;
  CMatrix base = x;
  bool first = true;
  while (e > 0) {
    if (e & 1) {
      if (first) {
        result = base;
        first = false;
      } else {
        result = (result * base).eval();
      }
    }
    e >>= 1;
    if (e > 0) base = (base * base).eval();
  }
  return result;
}

bool all_finite(const CMatrix& m) {
  return m.array().real().allFinite() && m.array().imag().allFinite();
}

namespace {

void check_square_family(std::span<const CMatrix> mats, const Tolerances& tol,
                         const char* who) {
  if (mats.empty()) throw StructuralError(std::string(who) + ": empty tuple");
  const Eigen::Index d = mats.front().rows();
  for (const auto& m : mats) {
    if (m.rows() != m.cols() || m.rows() != d)
      throw StructuralError(std::string(who) + ": matrices must be square of equal size");
    if (!all_finite(m)) throw StructuralError(std::string(who) + ": non-finite entry");
  }
  if (d < 1) throw StructuralError(std::string(who) + ": zero dimension");
  if (d > tol.max_dim)
    throw StructuralError(std::string(who) + ": dimension " + std::to_string(d) +
                          " exceeds configured max_dim " + std::to_string(tol.max_dim));
}

double max_pairwise_commutator(std::span<const CMatrix> mats) {
  double worst = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::size_t j = i + 1; j < mats.size(); ++j)
      worst = std::max(worst, commutator_norm(mats[i], mats[j]));
  return worst;
}

double max_op_norm(std::span<const CMatrix> mats) {
  double r = 0.0;
  for (const auto& m : mats) r = std::max(r, op_norm(m));
  return r;
}

}  // namespace

CommutingTuple certify_tuple(std::vector<CMatrix> mats, const Tolerances& tol) {
  check_square_family(mats, tol, "certify_tuple");
  CommutingTuple out;
  out.mats = std::move(mats);
  out.comm_residual = max_pairwise_commutator(out.mats);
  const double scale = std::max(1.0, max_op_norm(out.mats));
  out.is_commuting = out.comm_residual <= tol.ctol * scale * scale;
  out.is_contraction = true;
  out.is_normal = true;
  out.is_self_adjoint = true;
  for (const auto& m : out.mats) {
    if (op_norm(m) > 1.0 + tol.ntol) out.is_contraction = false;
    const CMatrix adj = m.adjoint();
    if (op_norm((m * adj - adj * m).eval()) > tol.ctol) out.is_normal = false;
    if (op_norm((m - adj).eval()) > tol.ctol) out.is_self_adjoint = false;
  }
  return out;
}

std::vector<CMatrix> PerturbationPath::at(double t) const {
  std::vector<CMatrix> x;
  x.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) x.push_back(a.mats[j] + t * v[j]);
  return x;
}

PerturbationPath build_path(const CommutingTuple& a, const CommutingTuple& b,
                            const Tolerances& tol) {
  if (a.n() != b.n()) throw StructuralError("build_path: tuples differ in arity");
  if (a.dim() != b.dim()) throw StructuralError("build_path: tuples differ in dimension");

  PerturbationPath path;
  path.a = a;
  path.b = b;
  path.v.reserve(a.mats.size());
  for (std::size_t j = 0; j < a.mats.size(); ++j) path.v.push_back(b.mats[j] - a.mats[j]);

  std::vector<CMatrix> family;
  family.reserve(3 * a.mats.size());
  family.insert(family.end(), a.mats.begin(), a.mats.end());
  family.insert(family.end(), b.mats.begin(), b.mats.end());
  family.insert(family.end(), path.v.begin(), path.v.end());
  path.comm_residual = max_pairwise_commutator(family);
  const double scale = std::max(1.0, max_op_norm(family));
  path.path_valid = path.comm_residual <= tol.ctol * scale * scale;
  path.normal_endpoints = a.is_normal && b.is_normal;

  path.contractive = a.is_contraction && b.is_contraction;
  const int grid = std::max(2, tol.path_grid);
  for (int g = 1; g + 1 < grid && path.contractive; ++g) {
    const double t = static_cast<double>(g) / (grid - 1);
    for (std::size_t j = 0; j < a.mats.size(); ++j) {
      if (op_norm((a.mats[j] + t * path.v[j]).eval()) > 1.0 + tol.ntol) {
        path.contractive = false;
        break;
      }
    }
  }
  return path;
}

CMatrix ordered_monomial(std::span<const CMatrix> mats, const MultiIndex& k) {
  if (k.size() != mats.size())
    throw StructuralError("ordered_monomial: multi-index length differs from tuple arity");
  if (mats.empty()) throw StructuralError("ordered_monomial: empty tuple");
  const Eigen::Index d = mats.front().rows();
  CMatrix out = CMatrix::Identity(d, d);
  bool identity = true;
  for (std::size_t j = 0; j < mats.size(); ++j) {
    if (k[j] == 0) continue;
    CMatrix p = matrix_power(mats[j], k[j]);
    if (identity) {
      out = std::move(p);
      identity = false;
    } else {
      out = (out * p).eval();
    }
  }
  return out;
}

CMatrix pairwise_sum(std::vector<CMatrix> terms, Eigen::Index dim) {
  if (terms.empty()) return CMatrix::Zero(dim, dim);
  while (terms.size() > 1) {
    std::vector<CMatrix> next;
    next.reserve((terms.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < terms.size(); i += 2) next.push_back(terms[i] + terms[i + 1]);
    if (terms.size() % 2) next.push_back(std::move(terms.back()));
    terms = std::move(next);
  }
  return std::move(terms.front());
}

}  // namespace hoss

#pragma once

// Reference computations used by the tests. Nothing here calls into the
// library's derivative, divided-difference or quadrature code.

#include <complex>
#include <random>
#include <vector>

#include "hoss/mpoly.hpp"

namespace oracle {

using hoss::CMatrix;
using hoss::Complex;
using hoss::MultiIndex;
using hoss::MultiPoly;

inline CMatrix random_matrix(int d, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = scale * Complex(nd(gen), nd(gen));
  return m;
}

inline CMatrix random_unitary(int d, std::mt19937_64& gen) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(d, gen));
  return qr.householderQ() * CMatrix::Identity(d, d);
}

inline Complex random_disc(std::mt19937_64& gen, double r = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = r * std::sqrt(u(gen));
  const double th = 2.0 * M_PI * u(gen);
  return std::polar(rho, th);
}

inline Complex random_circle(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  return std::polar(1.0, u(gen));
}

/// Dense random polynomial with every exponent k_j <= deg[j].
inline MultiPoly random_poly(const MultiIndex& deg, std::mt19937_64& gen, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const int n = static_cast<int>(deg.size());
  MultiPoly f(n);
  MultiIndex k(n, 0);
  while (true) {
    f.add_term(k, scale * Complex(nd(gen), nd(gen)));
    int pos = n - 1;
    while (pos >= 0 && ++k[pos] > deg[pos]) k[pos--] = 0;
    if (pos < 0) break;
  }
  return f;
}

/// Term-by-term evaluation with std::pow.
inline Complex naive_eval(const MultiPoly& f, const std::vector<Complex>& z) {
  Complex acc = 0.0;
  for (const auto& [k, c] : f.terms()) {
    Complex term = c;
    for (std::size_t j = 0; j < k.size(); ++j) term *= std::pow(z[j], k[j]);
    acc += term;
  }
  return acc;
}

/// Coefficients of the scalar polynomial t -> f(a + t v).
inline std::vector<Complex> along_line(const MultiPoly& f, const std::vector<Complex>& a,
                                       const std::vector<Complex>& v) {
  std::vector<Complex> out(1, 0.0);
  for (const auto& [k, c] : f.terms()) {
    std::vector<Complex> prod{c};
    for (std::size_t j = 0; j < k.size(); ++j)
      for (int e = 0; e < k[j]; ++e) {
        std::vector<Complex> next(prod.size() + 1, 0.0);
        for (std::size_t i = 0; i < prod.size(); ++i) {
          next[i] += prod[i] * a[j];
          next[i + 1] += prod[i] * v[j];
        }
        prod = std::move(next);
      }
    if (prod.size() > out.size()) out.resize(prod.size(), 0.0);
    for (std::size_t i = 0; i < prod.size(); ++i) out[i] += prod[i];
  }
  return out;
}

/// m-th derivative of sum c_i t^i at t.
inline Complex poly_derivative(const std::vector<Complex>& c, int m, double t) {
  Complex acc = 0.0;
  for (int i = m; i < static_cast<int>(c.size()); ++i) {
    double fall = 1.0;
    for (int s = 0; s < m; ++s) fall *= i - s;
    acc += c[i] * fall * std::pow(t, i - m);
  }
  return acc;
}

/// m-th central difference of F at t with step h.
template <typename F>
CMatrix central_difference(F&& fn, int m, double t, double h) {
  CMatrix acc;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    const CMatrix term = ((j % 2) ? -binom : binom) * fn(t + (0.5 * m - j) * h);
    acc = j == 0 ? term : CMatrix(acc + term);
    binom = binom * (m - j) / (j + 1);
  }
  return acc / std::pow(h, m);
}

/// Richardson table over h, h/2, ... For F a polynomial of degree deg the
/// central-difference error has floor((deg - m) / 2) even powers of h, so that
/// many extrapolation levels remove the truncation error entirely.
template <typename F>
CMatrix extrapolated_difference(F&& fn, int m, double t, double h, int deg) {
  const int levels = 1 + std::max(0, (deg - m) / 2);
  std::vector<CMatrix> row;
  for (int l = 0; l < levels; ++l) row.push_back(central_difference(fn, m, t, h / std::pow(2.0, l)));
  for (int k = 1; k < levels; ++k) {
    const double w = std::pow(4.0, k);
    for (int l = levels - 1; l >= k; --l) row[l] = (w * row[l] - row[l - 1]) / (w - 1.0);
  }
  return row.back();
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

/// Classic divided-difference table on function values; distinct nodes only.
template <typename F>
Complex divided_difference(F&& fn, const std::vector<Complex>& x) {
  std::vector<Complex> d;
  for (const auto& xi : x) d.push_back(fn(xi));
  for (std::size_t level = 1; level < x.size(); ++level)
    for (std::size_t i = x.size() - 1; i >= level; --i) d[i] = (d[i] - d[i - 1]) / (x[i] - x[i - level]);
  return d.back();
}

/// Jointly diagonal path U diag(a_j + t v_j) U*, with the eigenvalue data kept
/// for scalar oracles. Both endpoints lie in the closed disc of radius r
/// (or in [-r, r] when real is set).
struct DiagonalPath {
  CMatrix u;
  std::vector<std::vector<Complex>> a;  // a[j][i]
  std::vector<std::vector<Complex>> v;
  hoss::PerturbationPath path;
};

inline DiagonalPath diagonal_path(int n, int d, std::mt19937_64& gen, double v_scale = 0.3, bool real = false,
                                  bool identity_basis = false) {
  DiagonalPath out;
  out.u = identity_basis ? CMatrix(CMatrix::Identity(d, d)) : random_unitary(d, gen);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<CMatrix> am, bm;
  for (int j = 0; j < n; ++j) {
    std::vector<Complex> aj(d), vj(d);
    for (int i = 0; i < d; ++i) {
      Complex a0 = real ? Complex(u(gen), 0.0) : random_disc(gen);
      Complex b0 = a0 + (real ? Complex(v_scale * u(gen), 0.0) : random_disc(gen, v_scale));
      if (std::abs(b0) > 1.0) b0 /= std::abs(b0);
      aj[i] = a0;
      vj[i] = b0 - a0;
    }
    CMatrix da = CMatrix::Zero(d, d), db = CMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      da(i, i) = aj[i];
      db(i, i) = aj[i] + vj[i];
    }
    am.push_back(out.u * da * out.u.adjoint());
    bm.push_back(out.u * db * out.u.adjoint());
    out.a.push_back(aj);
    out.v.push_back(vj);
  }
  out.path = hoss::build_path(hoss::certify_tuple(am), hoss::certify_tuple(bm));
  return out;
}

/// Per-slot coefficient lists of t -> f(a_i + t v_i).
inline std::vector<std::vector<Complex>> slot_lines(const MultiPoly& f, const DiagonalPath& p) {
  const int d = static_cast<int>(p.a.front().size());
  const int n = static_cast<int>(p.a.size());
  std::vector<std::vector<Complex>> out;
  for (int i = 0; i < d; ++i) {
    std::vector<Complex> ai(n), vi(n);
    for (int j = 0; j < n; ++j) {
      ai[j] = p.a[j][i];
      vi[j] = p.v[j][i];
    }
    out.push_back(along_line(f, ai, vi));
  }
  return out;
}

/// U diag(d^m/dt^m f(a_i + t v_i)) U*.
inline CMatrix diagonal_derivative(const MultiPoly& f, const DiagonalPath& p, int m, double t) {
  const auto lines = slot_lines(f, p);
  CMatrix dg = CMatrix::Zero(lines.size(), lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) dg(i, i) = poly_derivative(lines[i], m, t);
  return p.u * dg * p.u.adjoint();
}

inline double rel_err(const CMatrix& got, const CMatrix& want) {
  const double scale = std::max(want.norm(), 1e-300);
  return (got - want).norm() / scale;
}

}  // namespace oracle

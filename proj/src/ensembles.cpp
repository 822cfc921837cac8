#include "hoss/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hoss {

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  std::uint64_t z = seed_ + counter_ * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

Complex CounterRng::unit_disc(double radius) {
  const double r = radius * std::sqrt(uniform());
  return std::polar(r, 2.0 * std::numbers::pi * uniform());
}

std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::JointlyDiagonal: return "jointly_diagonal";
    case EnsembleKind::Circulant: return "circulant";
    case EnsembleKind::SelfAdjointDiagonal: return "self_adjoint_diagonal";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(const std::string& s) {
  if (s == "jointly_diagonal" || s == "JointlyDiagonal") return EnsembleKind::JointlyDiagonal;
  if (s == "circulant" || s == "Circulant") return EnsembleKind::Circulant;
  if (s == "self_adjoint_diagonal" || s == "SelfAdjointDiagonal") return EnsembleKind::SelfAdjointDiagonal;
  throw StructuralError("unknown ensemble kind '" + s + "'");
}

std::string to_string(AdversarialKind k) {
  return k == AdversarialKind::NonCommuting ? "non_commuting" : "non_normal_toeplitz";
}

CMatrix haar_unitary(int dim, CounterRng& rng) {
  CMatrix g(dim, dim);
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) g(r, c) = rng.complex_normal();
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const Complex d = rmat(c, c);
    const double a = std::abs(d);
    if (a > 0.0) q.col(c) *= d / a;
  }
  return q;
}

CMatrix dft_matrix(int dim) {
  CMatrix f(dim, dim);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      f(a, b) = std::polar(s, 2.0 * std::numbers::pi * ((a * b) % dim) / dim);
  return f;
}

namespace {

CMatrix conjugate_diagonal(const CMatrix& u, const Eigen::VectorXcd& d) {
  return u * d.asDiagonal() * u.adjoint();
}

}  // namespace

PerturbationPath draw_path(const EnsembleSpec& spec, const Tolerances& tol) {
  if (spec.n < 1 || spec.dim < 1) throw StructuralError("draw_path: n and dim must be positive");
  if (!(spec.v_scale >= 0.0)) throw StructuralError("draw_path: v_scale must be non-negative");
  CounterRng rng(spec.seed);
  const bool self_adjoint = spec.kind == EnsembleKind::SelfAdjointDiagonal;
  const CMatrix u = spec.kind == EnsembleKind::Circulant ? dft_matrix(spec.dim) : haar_unitary(spec.dim, rng);

  std::vector<CMatrix> a, b;
  for (int j = 0; j < spec.n; ++j) {
    Eigen::VectorXcd da(spec.dim), db(spec.dim);
    for (int i = 0; i < spec.dim; ++i) {
      if (self_adjoint) {
        const double x = rng.uniform(-1.0, 1.0);
        const double y = std::clamp(x + rng.uniform(-spec.v_scale, spec.v_scale), -1.0, 1.0);
        da(i) = x;
        db(i) = y;
      } else {
        const Complex x = rng.unit_disc();
        Complex y = x + rng.unit_disc(spec.v_scale);
        // projection onto the disc is 1-Lipschitz, so |y - x| <= v_scale survives it
        if (std::abs(y) > 1.0) y /= std::abs(y);
        da(i) = x;
        db(i) = y;
      }
    }
    CMatrix aj = conjugate_diagonal(u, da);
    CMatrix bj = conjugate_diagonal(u, db);
    if (self_adjoint) {
      aj = (0.5 * (aj + aj.adjoint())).eval();
      bj = (0.5 * (bj + bj.adjoint())).eval();
    }
    a.push_back(std::move(aj));
    b.push_back(std::move(bj));
  }
  return build_path(certify_tuple(std::move(a), tol), certify_tuple(std::move(b), tol), tol);
}

MultiPoly draw_function(const FunctionSpec& spec) {
  if (spec.n < 1 || spec.max_total_degree < 0) throw StructuralError("draw_function: bad spec");
  CounterRng rng(spec.seed);
  MultiPoly f(spec.n);
  MultiIndex k(spec.n, 0);
  // odometer over [0, D]^n in lexicographic order, filtered by total degree
  while (true) {
    int total = 0;
    bool capped = false;
    for (int e : k) {
      total += e;
      if (spec.max_var_degree >= 0 && e > spec.max_var_degree) capped = true;
    }
    if (total <= spec.max_total_degree && !capped) {
      const double s = spec.coeff_scale / ((1.0 + total) * (1.0 + total));
      f.add_term(k, s * rng.complex_normal());
    }
    int pos = spec.n - 1;
    while (pos >= 0 && ++k[pos] > spec.max_total_degree) k[pos--] = 0;
    if (pos < 0) break;
  }
  return f;
}

PerturbationPath adversarial_path(AdversarialKind kind, int dim, const Tolerances& tol) {
  if (dim < 2) throw StructuralError("adversarial_path: dim must be >= 2");
  std::vector<CMatrix> a(2, CMatrix::Zero(dim, dim)), b;
  if (kind == AdversarialKind::NonCommuting) {
    a[0](0, 0) = 0.5;
    a[0](1, 1) = -0.5;
    a[1](0, 0) = 0.2;
    a[1](1, 1) = -0.1;
    CMatrix v0 = CMatrix::Zero(dim, dim), v1 = CMatrix::Zero(dim, dim);
    v0(0, 1) = v0(1, 0) = 0.3;
    v1(0, 1) = Complex(0.0, -0.3);
    v1(1, 0) = Complex(0.0, 0.3);
    b = {a[0] + v0, a[1] + v1};
  } else {
    CMatrix s = CMatrix::Zero(dim, dim);
    for (int i = 0; i + 1 < dim; ++i) s(i, i + 1) = 1.0;
    const CMatrix s2 = s * s, s3 = s2 * s;
    a[0] = 0.5 * s;
    a[1] = 0.3 * s2;
    b = {0.5 * s + 0.3 * s2, 0.3 * s2 + 0.2 * s3};
  }
  return build_path(certify_tuple(std::move(a), tol), certify_tuple(std::move(b), tol), tol);
}

std::vector<CMatrix> random_projector_partition(int dim, int parts, CounterRng& rng) {
  if (parts < 1 || parts > dim) throw StructuralError("random_projector_partition: need 1 <= parts <= dim");
  const CMatrix u = haar_unitary(dim, rng);
  std::vector<int> group(dim);
  for (int c = 0; c < dim; ++c)
    group[c] = c < parts ? c : static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(parts));
  std::vector<CMatrix> proj(parts, CMatrix::Zero(dim, dim));
  for (int c = 0; c < dim; ++c) proj[group[c]] += u.col(c) * u.col(c).adjoint();
  return proj;
}

std::vector<CMatrix> eigenprojector_partition(const CMatrix& normal, double tol) {
  Eigen::ComplexSchur<CMatrix> schur(normal);
  const CMatrix& q = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  const Eigen::Index d = normal.rows();
  std::vector<Complex> reps;
  std::vector<CMatrix> proj;
  for (Eigen::Index c = 0; c < d; ++c) {
    const Complex lam = t(c, c);
    std::size_t g = 0;
    while (g < reps.size() && std::abs(reps[g] - lam) > tol) ++g;
    if (g == reps.size()) {
      reps.push_back(lam);
      proj.push_back(CMatrix::Zero(d, d));
    }
    proj[g] += q.col(c) * q.col(c).adjoint();
  }
  return proj;
}

}  // namespace hoss

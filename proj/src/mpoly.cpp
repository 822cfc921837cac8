#include "hoss/mpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hoss {

MultiPoly::MultiPoly(int n_vars) : n_vars_(n_vars) {
  if (n_vars < 1) throw StructuralError("MultiPoly: n_vars must be positive");
}

MultiPoly MultiPoly::constant(int n_vars, Complex c) {
  MultiPoly p(n_vars);
  p.add_term(MultiIndex(n_vars, 0), c);
  return p;
}

MultiPoly MultiPoly::monomial(MultiIndex k, Complex c) {
  MultiPoly p(static_cast<int>(k.size()));
  p.add_term(k, c);
  return p;
}

void MultiPoly::check_index(const MultiIndex& k) const {
  if (static_cast<int>(k.size()) != n_vars_)
    throw StructuralError("MultiPoly: multi-index length differs from n_vars");
  for (int e : k)
    if (e < 0) throw StructuralError("MultiPoly: negative exponent");
}

Complex MultiPoly::coeff(const MultiIndex& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Complex{} : it->second;
}

void MultiPoly::add_term(const MultiIndex& k, Complex c) {
  check_index(k);
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw StructuralError("MultiPoly: non-finite coefficient");
  if (c == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

int MultiPoly::max_degree(int j) const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k[j]);
  return d;
}

int MultiPoly::total_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) {
    int s = 0;
    for (int e : k) s += e;
    d = std::max(d, s);
  }
  return d;
}

MultiIndex MultiPoly::max_degrees() const {
  MultiIndex d(n_vars_, 0);
  for (const auto& [k, c] : terms_)
    for (int j = 0; j < n_vars_; ++j) d[j] = std::max(d[j], k[j]);
  return d;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  if (other.n_vars_ != n_vars_) throw StructuralError("MultiPoly: arity mismatch in +");
  for (const auto& [k, c] : other.terms_) add_term(k, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  if (other.n_vars_ != n_vars_) throw StructuralError("MultiPoly: arity mismatch in -");
  for (const auto& [k, c] : other.terms_) add_term(k, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(Complex s) {
  if (s == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    it = it->second == Complex{} ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

// ---------------------------------------------------------------------------

DomainKind DomainKind::refined() const {
  DomainKind d = *this;
  d.grid_per_axis = kind == Domain::Torus ? 2 * grid_per_axis : 2 * grid_per_axis - 1;
  return d;
}

std::vector<Complex> DomainKind::axis_samples() const {
  const int g = std::max(1, grid_per_axis);
  std::vector<Complex> s(g);
  if (kind == Domain::Torus) {
    for (int q = 0; q < g; ++q)
      s[q] = std::polar(radius, 2.0 * std::numbers::pi * q / g);
  } else if (g == 1) {
    s[0] = 0.0;
  } else {
    for (int q = 0; q < g; ++q) s[q] = -1.0 + 2.0 * q / (g - 1);
  }
  return s;
}

Complex eval_scalar(const MultiPoly& f, std::span<const Complex> z) {
  if (static_cast<int>(z.size()) != f.n_vars())
    throw StructuralError("eval_scalar: point length differs from n_vars");
  if (f.is_zero()) return 0.0;
  const MultiIndex deg = f.max_degrees();
  std::vector<std::vector<Complex>> pw(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    pw[j].resize(deg[j] + 1);
    pw[j][0] = 1.0;
    for (int e = 1; e <= deg[j]; ++e) pw[j][e] = pw[j][e - 1] * z[j];
  }
  Complex acc = 0.0;
  for (const auto& [k, c] : f.terms()) {
    Complex term = c;
    for (std::size_t j = 0; j < z.size(); ++j) term *= pw[j][k[j]];
    acc += term;
  }
  return acc;
}

CMatrix eval_operator(const MultiPoly& f, std::span<const CMatrix> mats) {
  if (static_cast<int>(mats.size()) != f.n_vars())
    throw StructuralError("eval_operator: tuple arity differs from n_vars");
  const Eigen::Index d = mats.front().rows();
  CMatrix acc = CMatrix::Zero(d, d);
  if (f.is_zero()) return acc;
  const MultiIndex deg = f.max_degrees();
  std::vector<std::vector<CMatrix>> pw(mats.size());
  for (std::size_t j = 0; j < mats.size(); ++j) {
    pw[j].reserve(deg[j] + 1);
    pw[j].push_back(CMatrix::Identity(d, d));
    for (int e = 1; e <= deg[j]; ++e) pw[j].push_back(pw[j].back() * mats[j]);
  }
  for (const auto& [k, c] : f.terms()) {
    CMatrix prod;
    bool started = false;
    for (std::size_t j = 0; j < mats.size(); ++j) {
      if (k[j] == 0) continue;
      if (!started) {
        prod = pw[j][k[j]];
        started = true;
      } else {
        prod = (prod * pw[j][k[j]]).eval();
      }
    }
    if (started)
      acc += c * prod;
    else
      acc.diagonal().array() += c;
  }
  return acc;
}

namespace {

double falling_factorial(int k, int r) {
  double v = 1.0;
  for (int s = 0; s < r; ++s) v *= static_cast<double>(k - s);
  return v;
}

void check_order(const MultiPoly& f, const MultiIndex& order, const char* who) {
  if (static_cast<int>(order.size()) != f.n_vars())
    throw StructuralError(std::string(who) + ": order length differs from n_vars");
  for (int r : order)
    if (r < 0) throw StructuralError(std::string(who) + ": negative order");
}

}  // namespace

MultiPoly partial_derivative(const MultiPoly& f, const MultiIndex& order) {
  check_order(f, order, "partial_derivative");
  MultiPoly out(f.n_vars());
  for (const auto& [k, c] : f.terms()) {
    MultiIndex kk = k;
    double scale = 1.0;
    bool vanishes = false;
    for (std::size_t j = 0; j < k.size(); ++j) {
      if (k[j] < order[j]) {
        vanishes = true;
        break;
      }
      scale *= falling_factorial(k[j], order[j]);
      kk[j] -= order[j];
    }
    if (!vanishes) out.add_term(kk, c * scale);
  }
  return out;
}

MultiPoly antiderivative(const MultiPoly& f, const MultiIndex& order) {
  check_order(f, order, "antiderivative");
  MultiPoly out(f.n_vars());
  for (const auto& [k, c] : f.terms()) {
    MultiIndex kk = k;
    double scale = 1.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      kk[j] += order[j];
      scale *= falling_factorial(kk[j], order[j]);
    }
    out.add_term(kk, c / scale);
  }
  return out;
}

MultiPoly embed_univariate(const MultiPoly& g, int n_vars, int j) {
  if (g.n_vars() != 1) throw StructuralError("embed_univariate: expected one variable");
  if (j < 0 || j >= n_vars) throw StructuralError("embed_univariate: coordinate out of range");
  MultiPoly out(n_vars);
  for (const auto& [k, c] : g.terms()) {
    MultiIndex kk(n_vars, 0);
    kk[j] = k[0];
    out.add_term(kk, c);
  }
  return out;
}

double coeff_upper(const MultiPoly& f, double radius) {
  double acc = 0.0;
  for (const auto& [k, c] : f.terms()) {
    int s = 0;
    for (int e : k) s += e;
    acc += std::abs(c) * std::pow(radius, s);
  }
  return acc;
}

double grid_sup(const MultiPoly& f, const DomainKind& dom) {
  if (f.is_zero()) return 0.0;
  const int n = f.n_vars();
  const MultiIndex deg = f.max_degrees();
  const std::vector<Complex> axis = dom.axis_samples();
  const int g = static_cast<int>(axis.size());

  // dense coefficient tensor, last axis fastest
  std::vector<int> shape(n);
  for (int j = 0; j < n; ++j) shape[j] = deg[j] + 1;
  auto flat_size = [](const std::vector<int>& s) {
    std::size_t p = 1;
    for (int e : s) p *= static_cast<std::size_t>(e);
    return p;
  };
  std::vector<Complex> tensor(flat_size(shape), Complex{});
  for (const auto& [k, c] : f.terms()) {
    std::size_t idx = 0;
    for (int j = 0; j < n; ++j) idx = idx * shape[j] + k[j];
    tensor[idx] = c;
  }

  for (int j = 0; j < n; ++j) {
    const int dj = shape[j];
    std::vector<Complex> vander(static_cast<std::size_t>(g) * dj);
    for (int q = 0; q < g; ++q) {
      Complex p = 1.0;
      for (int a = 0; a < dj; ++a) {
        vander[static_cast<std::size_t>(q) * dj + a] = p;
        p *= axis[q];
      }
    }
    std::size_t pre = 1, post = 1;
    for (int i = 0; i < j; ++i) pre *= shape[i];
    for (int i = j + 1; i < n; ++i) post *= shape[i];
    std::vector<Complex> next(pre * g * post, Complex{});
    for (std::size_t p = 0; p < pre; ++p)
      for (int q = 0; q < g; ++q) {
        Complex* out = &next[(p * g + q) * post];
        for (int a = 0; a < dj; ++a) {
          const Complex w = vander[static_cast<std::size_t>(q) * dj + a];
          const Complex* in = &tensor[(p * dj + a) * post];
          for (std::size_t r = 0; r < post; ++r) out[r] += w * in[r];
        }
      }
    tensor = std::move(next);
    shape[j] = g;
  }

  double best = 0.0;
  for (const Complex& v : tensor) best = std::max(best, std::abs(v));
  return best;
}

SupNorm sup_norm(const MultiPoly& f, const DomainKind& dom) {
  return {grid_sup(f, dom), coeff_upper(f, dom.kind == Domain::Torus ? dom.radius : 1.0)};
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Refused: return "refused";
  }
  return "unknown";
}

namespace {

bool fits_budget(const DomainKind& dom, int n_vars) {
  double pts = std::pow(static_cast<double>(dom.grid_per_axis), n_vars);
  return pts <= static_cast<double>(kMaxGridPoints);
}

}  // namespace

VonNeumannReport von_neumann_check(const MultiPoly& f, const CommutingTuple& tuple,
                                   DomainKind dom, double slack, int max_grid) {
  VonNeumannReport rep;
  if (tuple.n() != f.n_vars()) throw StructuralError("von_neumann_check: arity mismatch");
  if (!tuple.is_commuting || !tuple.is_normal) {
    rep.note = "tuple is not certified commuting normal; inequality only guaranteed under a normal dilation";
    return rep;
  }
  if (dom.kind == Domain::Cube && !tuple.is_self_adjoint) {
    rep.note = "Cube domain needs a self-adjoint tuple";
    return rep;
  }
  const double r = dom.kind == Domain::Torus ? dom.radius : 1.0;
  for (const auto& m : tuple.mats) {
    if (op_norm(m) > r * (1.0 + 1e-10)) {
      rep.note = "tuple exceeds the polydisc radius";
      return rep;
    }
  }

  rep.lhs = op_norm(eval_operator(f, tuple));
  rep.coeff_upper = coeff_upper(f, r);
  rep.grid_sup = grid_sup(f, dom);
  rep.grid_used = dom.grid_per_axis;
  while (rep.lhs > rep.grid_sup * (1.0 + slack)) {
    DomainKind next = dom.refined();
    if (next.grid_per_axis > max_grid || !fits_budget(next, f.n_vars())) break;
    dom = next;
    rep.grid_sup = std::max(rep.grid_sup, grid_sup(f, dom));
    rep.grid_used = dom.grid_per_axis;
  }
  const bool ok = rep.lhs <= rep.coeff_upper * (1.0 + slack) + 1e-14 &&
                  rep.lhs <= rep.grid_sup * (1.0 + slack) + 1e-14;
  rep.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

}  // namespace hoss

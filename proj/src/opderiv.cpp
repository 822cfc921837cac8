#include "hoss/opderiv.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <tuple>

namespace hoss {

int DerivTermSpec::total_order() const {
  int m = 0;
  for (const auto& c : coords) m += c.order;
  return m;
}

MultiIndex DerivTermSpec::order_index(int n_vars) const {
  MultiIndex o(n_vars, 0);
  for (const auto& c : coords) o.at(c.var) = c.order;
  return o;
}

double DerivTermSpec::multinomial_weight() const {
  double w = 1.0;
  int running = 0;
  for (const auto& c : coords)
    for (int s = 1; s <= c.order; ++s) w = w * (++running) / s;
  return w;
}

void DerivTermSpec::validate(int n_vars) const {
  if (coords.empty()) throw StructuralError("DerivTermSpec: empty term");
  int prev = -1;
  for (const auto& c : coords) {
    if (c.var <= prev) throw StructuralError("DerivTermSpec: coordinates must strictly increase");
    if (c.var >= n_vars) throw StructuralError("DerivTermSpec: coordinate out of range");
    if (c.order < 1) throw StructuralError("DerivTermSpec: orders must be >= 1");
    prev = c.var;
  }
}

std::string DerivTermSpec::to_string() const {
  std::string s;
  for (const auto& c : coords) {
    if (!s.empty()) s += ',';
    s += std::to_string(c.var + 1) + '^' + std::to_string(c.order);
  }
  return s;
}

DerivTermSpec parse_term(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  const std::string grammar = "expected comma-separated j^i with j >= 1 strictly increasing and i >= 1";
  if (s.empty()) throw StructuralError("empty term; " + grammar);
  DerivTermSpec term;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    const std::string item = s.substr(pos, end - pos);
    const std::size_t caret = item.find('^');
    auto all_digits = [](const std::string& x) {
      return !x.empty() && x.size() < 9 &&
             std::all_of(x.begin(), x.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (caret == std::string::npos || !all_digits(item.substr(0, caret)) || !all_digits(item.substr(caret + 1)))
      throw StructuralError("malformed term item '" + item + "'; " + grammar);
    const int j = std::stoi(item.substr(0, caret));
    const int i = std::stoi(item.substr(caret + 1));
    if (j < 1 || i < 1) throw StructuralError("term item '" + item + "' out of range; " + grammar);
    if (!term.coords.empty() && j - 1 <= term.coords.back().var)
      throw StructuralError("coordinates must strictly increase; " + grammar);
    term.coords.push_back({j - 1, i});
    pos = end + 1;
  }
  return term;
}

void for_each_composition(int total, int parts, const std::function<void(const Composition&)>& visit) {
  if (total < 0 || parts < 1) return;
  Composition c(parts, 0);
  // lexicographic: first part runs from 0 upward
  std::function<void(int, int)> rec = [&](int idx, int left) {
    if (idx == parts - 1) {
      c[idx] = left;
      visit(c);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[idx] = v;
      rec(idx + 1, left - v);
    }
  };
  rec(0, total);
}

std::vector<Composition> compositions(int total, int parts) {
  std::vector<Composition> out;
  for_each_composition(total, parts, [&](const Composition& c) { out.push_back(c); });
  return out;
}

std::vector<DerivTermSpec> derivative_terms(int n_vars, int m, int max_k) {
  std::vector<DerivTermSpec> out;
  if (m < 1) return out;
  int kmax = std::min(m, n_vars);
  if (max_k > 0) kmax = std::min(kmax, max_k);
  for (int k = 1; k <= kmax; ++k) {
    // j's: k-subsets of {0..n-1} in lexicographic order
    std::vector<int> js(k);
    for (int a = 0; a < k; ++a) js[a] = a;
    while (true) {
      for_each_composition(m - k, k, [&](const Composition& c) {
        DerivTermSpec t;
        for (int a = 0; a < k; ++a) t.coords.push_back({js[a], c[a] + 1});
        out.push_back(std::move(t));
      });
      int pos = k - 1;
      while (pos >= 0 && js[pos] == n_vars - k + pos) --pos;
      if (pos < 0) break;
      ++js[pos];
      for (int a = pos + 1; a < k; ++a) js[a] = js[a - 1] + 1;
    }
  }
  return out;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int s = 2; s <= n; ++s) f *= s;
  return f;
}

std::vector<CMatrix> powers_upto(const CMatrix& x, int e) {
  std::vector<CMatrix> pw;
  pw.reserve(std::max(e, 0) + 1);
  pw.push_back(CMatrix::Identity(x.rows(), x.cols()));
  for (int k = 1; k <= e; ++k) pw.push_back(pw.back() * x);
  return pw;
}

// n! sum over compositions of p - n into n + 1 parts of X^{p_0} V ... V X^{p_n}
CMatrix power_derivative_from(const std::vector<CMatrix>& xpow, const CMatrix& v, int p, int n) {
  const Eigen::Index d = v.rows();
  if (n > p) return CMatrix::Zero(d, d);
  if (n == 0) return xpow[p];
  CMatrix acc = CMatrix::Zero(d, d);
  for_each_composition(p - n, n + 1, [&](const Composition& c) {
    CMatrix prod = xpow[c[0]] * v;
    for (int r = 1; r < n; ++r) prod = (prod * xpow[c[r]] * v).eval();
    if (c[n] > 0) prod = (prod * xpow[c[n]]).eval();
    acc += prod;
  });
  return factorial(n) * acc;
}

// Powers of X_j(t) and memoised power derivatives at one point of the path.
class PathPoint {
 public:
  PathPoint(const PerturbationPath& path, double t, const MultiIndex& maxdeg)
      : path_(path) {
    const auto x = path.at(t);
    xpow_.reserve(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) xpow_.push_back(powers_upto(x[j], std::max(0, maxdeg[j])));
  }

  const CMatrix& power(int j, int e) const { return xpow_[j][e]; }

  const CMatrix& derivative(int j, int order, int e) {
    auto key = std::make_tuple(j, order, e);
    auto it = memo_.find(key);
    if (it == memo_.end())
      it = memo_.emplace(key, power_derivative_from(xpow_[j], path_.v[j], e, order)).first;
    return it->second;
  }

 private:
  const PerturbationPath& path_;
  std::vector<std::vector<CMatrix>> xpow_;
  std::map<std::tuple<int, int, int>, CMatrix> memo_;
};

CMatrix d_term_at(const MultiPoly& f, const DerivTermSpec& term, PathPoint& pt, Eigen::Index d) {
  const int n = f.n_vars();
  std::vector<int> order_of(n, 0);
  for (const auto& c : term.coords) order_of[c.var] = c.order;
  CMatrix acc = CMatrix::Zero(d, d);
  for (const auto& [k, ck] : f.terms()) {
    bool vanishes = false;
    for (const auto& c : term.coords)
      if (k[c.var] < c.order) vanishes = true;
    if (vanishes) continue;
    CMatrix prod;
    bool started = false;
    for (int j = 0; j < n; ++j) {
      const CMatrix* factor = nullptr;
      if (order_of[j] > 0)
        factor = &pt.derivative(j, order_of[j], k[j]);
      else if (k[j] > 0)
        factor = &pt.power(j, k[j]);
      if (!factor) continue;
      if (!started) {
        prod = *factor;
        started = true;
      } else {
        prod = (prod * *factor).eval();
      }
    }
    acc += ck * prod;
  }
  return acc;
}

void check_arity(const MultiPoly& f, const PerturbationPath& path, const char* who) {
  if (f.n_vars() != path.n())
    throw StructuralError(std::string(who) + ": path arity differs from n_vars");
}

}  // namespace

CMatrix power_derivative(const CMatrix& h, const CMatrix& v, int p, int n, double t) {
  if (h.rows() != v.rows() || h.cols() != v.cols() || h.rows() != h.cols())
    throw StructuralError("power_derivative: H and V must be square of equal size");
  if (p < 0 || n < 0) throw StructuralError("power_derivative: negative order");
  if (n > p) return CMatrix::Zero(h.rows(), h.cols());
  const CMatrix x = h + t * v;
  return power_derivative_from(powers_upto(x, p - n), v, p, n);
}

CMatrix d_term(const MultiPoly& f, const PerturbationPath& path, const DerivTermSpec& term, double t) {
  check_arity(f, path, "d_term");
  term.validate(f.n_vars());
  PathPoint pt(path, t, f.max_degrees());
  return d_term_at(f, term, pt, path.dim());
}

CMatrix full_derivative(const MultiPoly& f, const PerturbationPath& path, int m, double t) {
  check_arity(f, path, "full_derivative");
  if (m < 0) throw StructuralError("full_derivative: negative order");
  if (m == 0) return eval_operator(f, path.at(t));
  const Eigen::Index d = path.dim();
  if (m > f.total_degree()) return CMatrix::Zero(d, d);
  PathPoint pt(path, t, f.max_degrees());
  std::vector<CMatrix> parts;
  for (const auto& term : derivative_terms(f.n_vars(), m)) {
    CMatrix dt = d_term_at(f, term, pt, d);
    parts.push_back(term.multinomial_weight() * dt);
  }
  return pairwise_sum(std::move(parts), d);
}

CMatrix finite_difference(const MultiPoly& f, const PerturbationPath& path, int m, double t, double h) {
  check_arity(f, path, "finite_difference");
  if (m < 0) throw StructuralError("finite_difference: negative order");
  if (!(h > 0.0)) throw StructuralError("finite_difference: step must be positive");
  const Eigen::Index d = path.dim();
  CMatrix acc = CMatrix::Zero(d, d);
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    const double s = t + (0.5 * m - j) * h;
    const double sign = (j % 2) ? -1.0 : 1.0;
    acc += (sign * binom) * eval_operator(f, path.at(s));
    binom = binom * (m - j) / (j + 1);
  }
  return acc / std::pow(h, m);
}

CMatrix richardson_difference(const MultiPoly& f, const PerturbationPath& path, int m, double t,
                              double h, int levels) {
  levels = std::max(1, levels);
  std::vector<CMatrix> row;
  for (int i = 0; i < levels; ++i) {
    std::vector<CMatrix> next;
    next.push_back(finite_difference(f, path, m, t, h / std::pow(2.0, i)));
    double factor = 4.0;
    for (int k = 1; k <= i; ++k) {
      next.push_back(next[k - 1] + (next[k - 1] - row[k - 1]) / (factor - 1.0));
      factor *= 4.0;
    }
    row = std::move(next);
  }
  return row.back();
}

double default_fd_step(int m) {
  if (m <= 2) return 1e-2;
  if (m == 3) return 3e-2;
  return 5e-2;
}

}  // namespace hoss

#include "hoss/divdiff.hpp"

#include <algorithm>
#include <numeric>

#include "hoss/quadrature.hpp"

namespace hoss {

int DividedDiffSpec::total_order() const {
  int m = 0;
  for (const auto& c : coords) m += c.order();
  return m;
}

MultiIndex DividedDiffSpec::order_index(int n_vars) const {
  MultiIndex o(n_vars, 0);
  for (const auto& c : coords) o.at(c.var) = c.order();
  return o;
}

void DividedDiffSpec::validate(int n_vars) const {
  int prev = -1;
  for (const auto& c : coords) {
    if (c.var <= prev) throw StructuralError("DividedDiffSpec: coordinates must strictly increase");
    if (c.var >= n_vars) throw StructuralError("DividedDiffSpec: coordinate out of range");
    if (c.order() < 1) throw StructuralError("DividedDiffSpec: each coordinate needs order >= 1");
    prev = c.var;
  }
}

std::vector<Complex> complete_homogeneous(int dmax, std::span<const Complex> nodes) {
  std::vector<Complex> h(std::max(dmax, 0) + 1, Complex{});
  if (dmax < 0) return {};
  if (nodes.empty()) {
    h[0] = 1.0;
    return h;
  }
  // h for the first node alone: x_0^d
  h[0] = 1.0;
  for (int d = 1; d <= dmax; ++d) h[d] = h[d - 1] * nodes[0];
  for (std::size_t r = 1; r < nodes.size(); ++r)
    for (int d = 1; d <= dmax; ++d) h[d] += nodes[r] * h[d - 1];
  return h;
}

namespace {

// p^{(r)}(x) / r!
Complex taylor_coeff(std::span<const Complex> coeffs, int r, Complex x) {
  Complex acc = 0.0;
  for (int d = static_cast<int>(coeffs.size()) - 1; d >= r; --d) {
    // binomial(d, r) * c_d * x^(d-r), Horner in x
    double binom = 1.0;
    for (int s = 0; s < r; ++s) binom = binom * (d - s) / (s + 1);
    acc = acc * x + binom * coeffs[d];
  }
  return acc;
}

bool node_less(const Complex& a, const Complex& b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

}  // namespace

Complex divdiff_univariate(std::span<const Complex> coeffs, std::span<const Complex> nodes) {
  if (nodes.empty()) throw StructuralError("divdiff_univariate: need at least one node");
  std::vector<Complex> x(nodes.begin(), nodes.end());
  std::stable_sort(x.begin(), x.end(), node_less);
  const std::size_t k = x.size();
  // column-by-column table; col[i] holds p[x_i .. x_{i+len}]
  std::vector<Complex> col(k);
  for (std::size_t i = 0; i < k; ++i) col[i] = taylor_coeff(coeffs, 0, x[i]);
  for (std::size_t len = 1; len < k; ++len) {
    for (std::size_t i = 0; i + len < k; ++i) {
      const Complex a = x[i], b = x[i + len];
      if (a == b)
        col[i] = taylor_coeff(coeffs, static_cast<int>(len), a);
      else
        col[i] = (col[i + 1] - col[i]) / (b - a);
    }
  }
  return col[0];
}

MultiPoly divdiff_monomial(const MultiIndex& k, const DividedDiffSpec& spec) {
  const int n = static_cast<int>(k.size());
  spec.validate(n);
  MultiPoly out(n);
  Complex coeff = 1.0;
  MultiIndex rest = k;
  for (const auto& c : spec.coords) {
    const int d = k[c.var] - c.order();
    if (d < 0) return out;
    coeff *= complete_homogeneous(d, c.nodes)[d];
    rest[c.var] = 0;
  }
  out.add_term(rest, coeff);
  return out;
}

MultiPoly divdiff_apply(const MultiPoly& f, const DividedDiffSpec& spec) {
  spec.validate(f.n_vars());
  MultiPoly out(f.n_vars());
  // h tables per coordinate, shared by all terms
  std::vector<std::vector<Complex>> tables;
  for (const auto& c : spec.coords)
    tables.push_back(complete_homogeneous(std::max(0, f.max_degree(c.var) - c.order()), c.nodes));
  for (const auto& [k, ck] : f.terms()) {
    Complex coeff = ck;
    MultiIndex rest = k;
    bool empty = false;
    for (std::size_t l = 0; l < spec.coords.size(); ++l) {
      const auto& c = spec.coords[l];
      const int d = k[c.var] - c.order();
      if (d < 0) {
        empty = true;
        break;
      }
      coeff *= tables[l][d];
      rest[c.var] = 0;
    }
    if (!empty) out.add_term(rest, coeff);
  }
  return out;
}

MultiPoly divdiff_coordinate(const MultiPoly& f, const DivDiffCoord& coord) {
  if (coord.var < 0 || coord.var >= f.n_vars())
    throw StructuralError("divdiff_coordinate: coordinate out of range");
  // group by the exponents of the other variables; each group is a univariate slice
  std::map<MultiIndex, std::vector<Complex>> slices;
  for (const auto& [k, c] : f.terms()) {
    MultiIndex rest = k;
    rest[coord.var] = 0;
    auto& s = slices[rest];
    if (static_cast<int>(s.size()) <= k[coord.var]) s.resize(k[coord.var] + 1, Complex{});
    s[k[coord.var]] += c;
  }
  MultiPoly out(f.n_vars());
  for (const auto& [rest, coeffs] : slices) out.add_term(rest, divdiff_univariate(coeffs, coord.nodes));
  return out;
}

MultiPoly divdiff_recursive(const MultiPoly& f, const DividedDiffSpec& spec,
                            std::span<const int> application_order) {
  spec.validate(f.n_vars());
  std::vector<int> order(application_order.begin(), application_order.end());
  if (order.empty()) {
    order.resize(spec.coords.size());
    std::iota(order.begin(), order.end(), 0);
  }
  if (order.size() != spec.coords.size())
    throw StructuralError("divdiff_recursive: application order must list every coordinate");
  MultiPoly g = f;
  for (int l : order) g = divdiff_coordinate(g, spec.coords.at(l));
  return g;
}

int exact_divdiff_nodes(const MultiPoly& f) {
  int maxdeg = 0;
  for (int j = 0; j < f.n_vars(); ++j) maxdeg = std::max(maxdeg, f.max_degree(j));
  return std::max(1, (maxdeg + 2) / 2);
}

namespace {

struct BlockSample {
  Complex arg;
  double weight;
};

// Samples of the i-fold simplex 1 >= t_1 >= ... >= t_i >= 0 after t_j = t_{j-1} u_j,
// mapped to sum_{l=1}^{i} (nodes[l-1] - nodes[l]) t_{i+1-l} + nodes[i].
std::vector<BlockSample> simplex_block(const std::vector<Complex>& nodes, const QuadratureRule& rule) {
  const int i = static_cast<int>(nodes.size()) - 1;
  const int q = static_cast<int>(rule.nodes.size());
  std::vector<BlockSample> out;
  std::vector<int> idx(i, 0);
  std::vector<double> t(i);
  while (true) {
    double w = 1.0, prev = 1.0;
    for (int j = 0; j < i; ++j) {
      t[j] = prev * rule.nodes[idx[j]];
      w *= rule.weights[idx[j]] * prev;  // Jacobian factor t_{j-1}, t_0 = 1
      prev = t[j];
    }
    Complex arg = nodes[i];
    for (int l = 1; l <= i; ++l) arg += (nodes[l - 1] - nodes[l]) * t[i - l];
    out.push_back({arg, w});
    int pos = i - 1;
    while (pos >= 0 && ++idx[pos] == q) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

}  // namespace

Complex divdiff_integral(const MultiPoly& f, const DividedDiffSpec& spec,
                         std::span<const Complex> z, int nodes_per_axis) {
  const int n = f.n_vars();
  spec.validate(n);
  if (static_cast<int>(z.size()) != n) throw StructuralError("divdiff_integral: point length differs");
  const MultiPoly g = partial_derivative(f, spec.order_index(n));
  if (g.is_zero()) return 0.0;
  const int q = nodes_per_axis > 0 ? nodes_per_axis : exact_divdiff_nodes(f);
  const QuadratureRule rule = gauss_legendre_unit(q);

  std::vector<std::vector<BlockSample>> blocks;
  for (const auto& c : spec.coords) blocks.push_back(simplex_block(c.nodes, rule));

  std::vector<Complex> point(z.begin(), z.end());
  std::vector<std::size_t> idx(blocks.size(), 0);
  Complex acc = 0.0;
  if (blocks.empty()) return eval_scalar(g, point);
  while (true) {
    double w = 1.0;
    for (std::size_t l = 0; l < blocks.size(); ++l) {
      point[spec.coords[l].var] = blocks[l][idx[l]].arg;
      w *= blocks[l][idx[l]].weight;
    }
    acc += w * eval_scalar(g, point);
    int pos = static_cast<int>(blocks.size()) - 1;
    while (pos >= 0 && ++idx[pos] == blocks[pos].size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return acc;
}

double divdiff_bound(const MultiPoly& f, const DividedDiffSpec& spec, const DomainKind& dom) {
  spec.validate(f.n_vars());
  const MultiPoly g = partial_derivative(f, spec.order_index(f.n_vars()));
  double fact = 1.0;
  for (const auto& c : spec.coords)
    for (int s = 2; s <= c.order(); ++s) fact *= s;
  const double r = dom.kind == Domain::Torus ? dom.radius : 1.0;
  return coeff_upper(g, r) / fact;
}

}  // namespace hoss

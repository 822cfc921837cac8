#include <doctest.h>

#include "hoss/mpoly.hpp"
#include "oracles.hpp"

using namespace hoss;

namespace {

CMatrix diag_of(const std::vector<Complex>& l) {
  CMatrix m = CMatrix::Zero(l.size(), l.size());
  for (std::size_t i = 0; i < l.size(); ++i) m(i, i) = l[i];
  return m;
}

MultiPoly z1z2() { return MultiPoly::monomial({1, 1}); }

}  // namespace

TEST_SUITE("mpoly") {

TEST_CASE("canonical storage") {
  MultiPoly f(2);
  f.add_term({1, 0}, 2.0);
  f.add_term({0, 1}, 1.0);
  f.add_term({1, 0}, -2.0);
  CHECK(f.size() == 1);
  CHECK(f.coeff({1, 0}) == Complex(0.0));
  CHECK(f.max_degree(0) == 0);
  CHECK(MultiPoly(2).max_degree(0) == -1);
  CHECK(MultiPoly(2).total_degree() == -1);
  MultiPoly g(2);
  g.add_term({0, 1}, 1.0);
  CHECK(f == g);
  CHECK_THROWS_AS(f.add_term({1}, 1.0), StructuralError);
  CHECK_THROWS_AS(f.add_term({-1, 0}, 1.0), StructuralError);
}

TEST_CASE("eval_scalar") {
  const std::vector<Complex> z{2.0, Complex(0, 3)};
  CHECK(std::abs(eval_scalar(z1z2(), z) - Complex(0, 6)) == 0.0);
  CHECK(eval_scalar(MultiPoly::constant(2, 1.0), z) == Complex(1.0));

  std::mt19937_64 gen(21);
  for (int rep = 0; rep < 50; ++rep) {
    const MultiPoly f = oracle::random_poly({4, 3, 2}, gen);
    std::vector<Complex> p{oracle::random_disc(gen, 1.3), oracle::random_disc(gen), oracle::random_disc(gen, 0.7)};
    const Complex want = oracle::naive_eval(f, p);
    CHECK(std::abs(eval_scalar(f, p) - want) <= 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("eval_operator agrees with the spectral theorem") {
  std::mt19937_64 gen(4);
  const int d = 5;
  const CMatrix u = oracle::random_unitary(d, gen);
  std::vector<Complex> l1(d), l2(d);
  for (int i = 0; i < d; ++i) {
    l1[i] = oracle::random_disc(gen);
    l2[i] = oracle::random_disc(gen);
  }
  const std::vector<CMatrix> x{u * diag_of(l1) * u.adjoint(), u * diag_of(l2) * u.adjoint()};
  const auto tuple = certify_tuple(x);
  CHECK(oracle::rel_err(eval_operator(MultiPoly::monomial({1, 0}), tuple), x[0]) <= 1e-15);
  CHECK(oracle::rel_err(eval_operator(z1z2(), tuple), x[0] * x[1]) <= 1e-14);

  const MultiPoly f = oracle::random_poly({3, 4}, gen);
  std::vector<Complex> fl(d);
  for (int i = 0; i < d; ++i) fl[i] = oracle::naive_eval(f, {l1[i], l2[i]});
  CHECK(oracle::rel_err(eval_operator(f, tuple), u * diag_of(fl) * u.adjoint()) <= 1e-12);
  CHECK_THROWS_AS(eval_operator(f, certify_tuple({x[0]})), StructuralError);
}

TEST_CASE("partial_derivative") {
  CHECK(partial_derivative(MultiPoly::monomial({2}), {2}) == MultiPoly::constant(1, 2.0));
  CHECK(partial_derivative(z1z2(), {1, 1}) == MultiPoly::constant(2, 1.0));
  CHECK(partial_derivative(z1z2(), {2, 0}).is_zero());

  // third mixed partial d^3/dz1^2 dz2 against nested five-point central differences
  std::mt19937_64 gen(8);
  const MultiPoly f = oracle::random_poly({4, 3}, gen);
  const MultiPoly d = partial_derivative(f, {2, 1});
  const double h = 0.05;
  const double w2[5] = {-1, 16, -30, 16, -1};
  const double w1[5] = {1, -8, 0, 8, -1};
  for (int rep = 0; rep < 5; ++rep) {
    const Complex x = oracle::random_disc(gen, 0.8), y = oracle::random_disc(gen, 0.8);
    Complex fd = 0.0;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b)
        fd += w2[a] * w1[b] * oracle::naive_eval(f, {x + double(a - 2) * h, y + double(b - 2) * h});
    fd /= 12.0 * h * h * 12.0 * h;
    const Complex want = eval_scalar(d, std::vector<Complex>{x, y});
    CHECK(std::abs(fd - want) <= 1e-6 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("antiderivative") {
  CHECK(antiderivative(MultiPoly::constant(1, 2.0), {2}) == MultiPoly::monomial({2}));
  CHECK(antiderivative(MultiPoly::constant(2, 1.0), {1, 1}) == z1z2());
  std::mt19937_64 gen(12);
  for (int rep = 0; rep < 20; ++rep) {
    const MultiPoly f = oracle::random_poly({3, 2, 2}, gen);
    const MultiIndex order{rep % 3, 1, (rep / 3) % 2};
    const MultiPoly back = partial_derivative(antiderivative(f, order), order);
    for (const auto& [k, c] : f.terms()) CHECK(std::abs(back.coeff(k) - c) <= 1e-13 * std::abs(c));
    CHECK(back.size() == f.size());
  }
}

TEST_CASE("sup_norm") {
  auto s = sup_norm(z1z2(), DomainKind::torus(16));
  CHECK(s.grid_sup == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.coeff_upper == doctest::Approx(1.0));

  MultiPoly sum(2);
  sum.add_term({1, 0}, 1.0);
  sum.add_term({0, 1}, 1.0);
  for (int g : {4, 8, 64}) CHECK(grid_sup(sum, DomainKind::torus(g)) == doctest::Approx(2.0).epsilon(1e-14));

  const MultiPoly c = MultiPoly::constant(3, Complex(3, 4));
  auto sc = sup_norm(c, DomainKind::cube());
  CHECK(sc.grid_sup == doctest::Approx(5.0));
  CHECK(sc.coeff_upper == doctest::Approx(5.0));

  // brute force over the same grid
  std::mt19937_64 gen(2);
  const MultiPoly f = oracle::random_poly({3, 3}, gen);
  for (auto dom : {DomainKind::torus(12), DomainKind::cube(13), DomainKind::torus(10, 0.5)}) {
    const auto pts = dom.axis_samples();
    double best = 0.0;
    for (auto p : pts)
      for (auto q : pts) best = std::max(best, std::abs(oracle::naive_eval(f, {p, q})));
    CHECK(grid_sup(f, dom) == doctest::Approx(best).epsilon(1e-12));
    CHECK(grid_sup(f, dom) <= coeff_upper(f, dom.radius) * (1 + 1e-12));
  }
}

TEST_CASE("von_neumann_check") {
  std::mt19937_64 gen(17);
  const int d = 4;
  const CMatrix u = oracle::random_unitary(d, gen);
  std::vector<Complex> l1(d), l2(d);
  for (int i = 0; i < d; ++i) {
    l1[i] = oracle::random_disc(gen);
    l2[i] = oracle::random_disc(gen);
  }
  const auto tuple = certify_tuple({u * diag_of(l1) * u.adjoint(), u * diag_of(l2) * u.adjoint()});

  auto r1 = von_neumann_check(MultiPoly::monomial({1, 0}), tuple, DomainKind::torus());
  CHECK(r1.status == CheckStatus::Pass);
  CHECK(r1.lhs <= 1.0);

  const MultiPoly f = oracle::random_poly({3, 3}, gen);
  auto r = von_neumann_check(f, tuple, DomainKind::torus());
  CHECK(r.status == CheckStatus::Pass);
  double want = 0.0;
  for (int i = 0; i < d; ++i) want = std::max(want, std::abs(oracle::naive_eval(f, {l1[i], l2[i]})));
  CHECK(r.lhs == doctest::Approx(want).epsilon(1e-12));

  std::vector<Complex> c1(d), c2(d);
  for (int i = 0; i < d; ++i) {
    c1[i] = oracle::random_circle(gen);
    c2[i] = oracle::random_circle(gen);
  }
  auto unit = von_neumann_check(z1z2(), certify_tuple({diag_of(c1), diag_of(c2)}), DomainKind::torus());
  CHECK(unit.status == CheckStatus::Pass);
  CHECK(unit.lhs == doctest::Approx(1.0).epsilon(1e-14));

  CMatrix nil = CMatrix::Zero(2, 2);
  nil(0, 1) = 0.5;
  auto refused = von_neumann_check(MultiPoly::monomial({1}), certify_tuple({nil}), DomainKind::torus());
  CHECK(refused.status == CheckStatus::Refused);
  auto cube_refused = von_neumann_check(z1z2(), tuple, DomainKind::cube());
  CHECK(cube_refused.status == CheckStatus::Refused);
}

}

#include <doctest.h>

#include "hoss/ensembles.hpp"
#include "oracles.hpp"

using namespace hoss;

namespace {

bool bit_equal(const CMatrix& a, const CMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), sizeof(Complex) * a.size()) == 0;
}

}  // namespace

TEST_SUITE("ensembles") {

TEST_CASE("counter rng") {
  CounterRng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a.counter() == 100);
  // SplitMix64 reference: first output for seed 0
  CounterRng z(0);
  CHECK(z.next_u64() == 0xe220a8397b1dcdafULL);
  CounterRng u(7);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double x = u.uniform();
    CHECK((x >= 0.0 && x < 1.0));
    mean += x;
  }
  CHECK(mean / 20000 == doctest::Approx(0.5).epsilon(0.02));
  for (int i = 0; i < 1000; ++i) CHECK(std::abs(u.unit_disc(0.3)) <= 0.3);
}

TEST_CASE("kind names round-trip") {
  for (auto k : {EnsembleKind::JointlyDiagonal, EnsembleKind::Circulant, EnsembleKind::SelfAdjointDiagonal})
    CHECK(parse_ensemble_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_ensemble_kind("gaussian"), StructuralError);
}

TEST_CASE("haar and dft unitaries") {
  CounterRng rng(5);
  const CMatrix u = haar_unitary(6, rng);
  CHECK((u.adjoint() * u - CMatrix::Identity(6, 6)).norm() <= 1e-13);
  const CMatrix f = dft_matrix(5);
  CHECK((f.adjoint() * f - CMatrix::Identity(5, 5)).norm() <= 1e-13);
}

TEST_CASE("v_scale zero gives a constant path") {
  for (auto k : {EnsembleKind::JointlyDiagonal, EnsembleKind::Circulant, EnsembleKind::SelfAdjointDiagonal}) {
    EnsembleSpec s;
    s.kind = k;
    s.v_scale = 0.0;
    s.seed = 3;
    const auto p = draw_path(s);
    for (int j = 0; j < p.n(); ++j) {
      CHECK(p.v[j].norm() == 0.0);
      CHECK(bit_equal(p.a.mats[j], p.b.mats[j]));
    }
  }
}

TEST_CASE("draws are deterministic") {
  EnsembleSpec s;
  s.kind = EnsembleKind::Circulant;
  s.n = 3;
  s.dim = 6;
  s.seed = 99;
  const auto p = draw_path(s), q = draw_path(s);
  for (int j = 0; j < 3; ++j) {
    CHECK(bit_equal(p.a.mats[j], q.a.mats[j]));
    CHECK(bit_equal(p.b.mats[j], q.b.mats[j]));
  }
  FunctionSpec fs;
  fs.n = 3;
  fs.seed = 4;
  CHECK(draw_function(fs) == draw_function(fs));
  fs.seed = 5;
  CHECK_FALSE(draw_function(fs) == draw_function(FunctionSpec{3, 4, 1.0, 4}));
}

TEST_CASE("every draw certifies") {
  for (int i = 0; i < 100; ++i) {
    EnsembleSpec s;
    s.kind = static_cast<EnsembleKind>(i % 3);
    s.n = 1 + i % 3;
    s.dim = 2 + i % 7;
    s.v_scale = 0.05 + 0.01 * (i % 30);
    s.seed = 10000 + i;
    const auto p = draw_path(s);
    CHECK(p.comm_residual <= 1e-12);
    CHECK(p.path_valid);
    CHECK(p.contractive);
    CHECK(p.normal_endpoints);
    CHECK(p.a.is_normal);
    CHECK(p.b.is_normal);
    CHECK(p.a.is_contraction);
    CHECK(p.b.is_contraction);
    if (s.kind == EnsembleKind::SelfAdjointDiagonal) CHECK((p.a.is_self_adjoint && p.b.is_self_adjoint));
    if (s.kind != EnsembleKind::Circulant)
      for (const auto& v : p.v) CHECK(v.norm() <= s.v_scale * std::sqrt(double(s.dim)) * (1 + 1e-12));
  }
}

TEST_CASE("draw_function") {
  FunctionSpec c;
  c.n = 2;
  c.max_total_degree = 0;
  c.seed = 1;
  const auto f = draw_function(c);
  CHECK(f.total_degree() <= 0);
  CHECK(f.size() <= 1);
  FunctionSpec g;
  g.n = 3;
  g.max_total_degree = 4;
  g.seed = 2;
  const auto h = draw_function(g);
  CHECK(h.total_degree() <= 4);
  CHECK(h.size() == 35);  // C(4 + 3, 3) monomials
  CHECK(std::isfinite(coeff_upper(h)));
  g.max_var_degree = 1;
  const auto capped = draw_function(g);
  for (const auto& [k, v] : capped.terms())
    for (int e : k) CHECK(e <= 1);
}

TEST_CASE("adversarial paths") {
  const auto nc = adversarial_path(AdversarialKind::NonCommuting, 2);
  CHECK(nc.dim() == 2);
  CHECK_FALSE(nc.path_valid);
  const auto tp = adversarial_path(AdversarialKind::NonNormalToeplitz);
  CHECK(tp.path_valid);
  CHECK(tp.contractive);
  CHECK_FALSE(tp.normal_endpoints);
  CHECK(tp.a.is_commuting);
  CHECK_FALSE(tp.a.is_normal);
}

TEST_CASE("projector partitions") {
  CounterRng rng(11);
  for (int parts = 1; parts <= 4; ++parts) {
    const auto fam = random_projector_partition(5, parts, rng);
    CHECK(fam.size() == static_cast<std::size_t>(parts));
    CMatrix sum = CMatrix::Zero(5, 5);
    for (const auto& e : fam) {
      CHECK((e * e - e).norm() <= 1e-12);
      CHECK((e - e.adjoint()).norm() <= 1e-12);
      sum += e;
    }
    CHECK((sum - CMatrix::Identity(5, 5)).norm() <= 1e-12);
  }
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = 0.5;
  d(1, 1) = 0.5;
  d(2, 2) = -0.2;
  const auto eig = eigenprojector_partition(d);
  REQUIRE(eig.size() == 2);
}

}

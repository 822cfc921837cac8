#include "hoss/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

namespace hoss {

HypothesisStatus hypotheses_at(const PerturbationPath& path, double t, Domain domain,
                               const Tolerances& tol) {
  HypothesisStatus h;
  const CommutingTuple x = certify_tuple(path.at(t), tol);
  h.commuting = path.path_valid && x.is_commuting;
  h.normal = x.is_normal;
  h.contraction = x.is_contraction;
  h.self_adjoint = x.is_self_adjoint;
  h.ok = h.commuting && h.normal && h.contraction && (domain == Domain::Torus || h.self_adjoint);
  if (!h.commuting) h.note = "X(t) not commuting";
  else if (!h.normal) h.note = "X(t) not normal (no dilation certified)";
  else if (!h.contraction) h.note = "X(t) not a contraction";
  else if (!h.ok) h.note = "Cube domain needs self-adjoint X(t)";
  return h;
}

EstimateReport trace_estimate_check(const MultiPoly& f, const PerturbationPath& path,
                                    const DerivTermSpec& term, double t, const DomainKind& dom,
                                    const EstimateOptions& opts,
                                    const std::optional<SupNorm>& known_sup) {
  if (f.n_vars() != path.n()) throw StructuralError("trace_estimate_check: arity mismatch");
  term.validate(f.n_vars());
  EstimateReport rep;
  rep.term = term;
  rep.t = t;

  const HypothesisStatus hyp = hypotheses_at(path, t, dom.kind, opts.tol);
  rep.in_hypothesis = hyp.ok;
  rep.note = hyp.note;

  rep.lhs = std::abs(trace(d_term(f, path, term, t)));
  rep.rhs_factor = 1.0;
  for (const auto& c : term.coords) rep.rhs_factor *= std::pow(hilbert_schmidt_norm(path.v[c.var]), c.order);

  const MultiPoly dm = partial_derivative(f, term.order_index(f.n_vars()));
  const SupNorm sup = known_sup ? *known_sup : sup_norm(dm, dom);
  rep.grid_sup = sup.grid_sup;
  rep.coeff_upper = sup.coeff_upper;
  rep.grid_used = dom.grid_per_axis;

  constexpr double kAbsFloor = 1e-13;
  rep.pass_sound = rep.lhs <= rep.rhs_factor * rep.coeff_upper * (1.0 + opts.slack) + kAbsFloor;

  auto strict_ok = [&] { return rep.lhs <= rep.rhs_factor * rep.grid_sup * (1.0 + opts.slack) + kAbsFloor; };
  DomainKind grid = dom;
  while (!strict_ok()) {
    DomainKind next = grid.refined();
    const double pts = std::pow(static_cast<double>(next.grid_per_axis), f.n_vars());
    if (next.grid_per_axis > opts.max_grid || pts > static_cast<double>(kMaxGridPoints)) break;
    grid = next;
    rep.grid_sup = std::max(rep.grid_sup, hoss::grid_sup(dm, grid));
    rep.grid_used = grid.grid_per_axis;
  }
  rep.pass_strict = strict_ok();
  const double denom = rep.rhs_factor * rep.grid_sup;
  rep.ratio = denom > 0.0 ? rep.lhs / denom : 0.0;
  return rep;
}

namespace {

void check_resolution(const std::vector<CMatrix>& family, Eigen::Index d, double tol) {
  if (family.empty()) throw StructuralError("hs_block_bound_check: empty projector family");
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t a = 0; a < family.size(); ++a) {
    const CMatrix& e = family[a];
    if (e.rows() != d || e.cols() != d) throw StructuralError("hs_block_bound_check: projector shape mismatch");
    if ((e - e.adjoint()).norm() > tol * d) throw StructuralError("hs_block_bound_check: projector not self-adjoint");
    for (std::size_t b = a; b < family.size(); ++b) {
      const CMatrix prod = e * family[b];
      const double err = a == b ? (prod - e).norm() : prod.norm();
      if (err > tol * d) throw StructuralError("hs_block_bound_check: projectors not mutually orthogonal idempotents");
    }
    sum += e;
  }
  if ((sum - CMatrix::Identity(d, d)).norm() > tol * d)
    throw StructuralError("hs_block_bound_check: projectors do not sum to the identity");
}

}  // namespace

HsBlockReport hs_block_bound_check(const std::vector<std::vector<CMatrix>>& partitions,
                                   const std::vector<CMatrix>& v, double tol) {
  const std::size_t m = v.size();
  if (m < 2) throw StructuralError("hs_block_bound_check: needs m >= 2");
  if (partitions.size() != m) throw StructuralError("hs_block_bound_check: one projector family per V");
  const Eigen::Index d = v.front().rows();
  for (const auto& vj : v)
    if (vj.rows() != d || vj.cols() != d) throw StructuralError("hs_block_bound_check: V shape mismatch");
  for (const auto& fam : partitions) check_resolution(fam, d, tol);

  // EV[j][a] = E_j(a) V_j
  std::vector<std::vector<CMatrix>> ev(m);
  for (std::size_t j = 0; j < m; ++j)
    for (const auto& e : partitions[j]) ev[j].push_back(e * v[j]);

  HsBlockReport rep;
  std::vector<CMatrix> prefix(m);
  std::vector<std::size_t> idx(m, 0);
  auto rebuild = [&](std::size_t from) {
    for (std::size_t j = from; j + 1 < m; ++j)
      prefix[j] = j == 0 ? ev[0][idx[0]] : (prefix[j - 1] * ev[j][idx[j]]).eval();
  };
  rebuild(0);
  auto advance = [&] {
    for (std::size_t pos = m; pos-- > 0;) {
      if (++idx[pos] < ev[pos].size()) {
        rebuild(pos);
        return true;
      }
      idx[pos] = 0;
    }
    return false;
  };
  do {
    const CMatrix& left = prefix[m - 2];
    const CMatrix& right = ev[m - 1][idx[m - 1]];
    // tr(L R) = sum_{ab} L_ab R_ba
    rep.lhs += std::abs((left.array() * right.transpose().array()).sum());
    ++rep.tuples;
  } while (advance());
  rep.rhs = 1.0;
  for (const auto& vj : v) rep.rhs *= hilbert_schmidt_norm(vj);
  rep.passed = rep.lhs <= rep.rhs * (1.0 + 1e-10) + 1e-14;
  return rep;
}

std::uint64_t function_seed(std::uint64_t draw_seed) { return draw_seed ^ 0xa0761d6478bd642fULL; }

namespace {

struct DrawResult {
  std::vector<SweepCase> cases;
};

DomainKind domain_for(EnsembleKind kind, int grid) {
  if (kind == EnsembleKind::SelfAdjointDiagonal) return DomainKind::cube(grid > 0 ? grid : 65);
  return DomainKind::torus(grid > 0 ? grid : 64);
}

void run_cases(const MultiPoly& f, const PerturbationPath& path, const DomainKind& dom,
               const SweepConfig& cfg, std::uint64_t seed, const std::string& label,
               std::vector<SweepCase>& out) {
  std::map<std::string, SupNorm> sup_cache;
  for (int m = cfg.m_min; m <= cfg.m_max; ++m) {
    for (const auto& term : derivative_terms(f.n_vars(), m, cfg.max_k)) {
      const std::string key = term.to_string();
      auto it = sup_cache.find(key);
      if (it == sup_cache.end())
        it = sup_cache.emplace(key, sup_norm(partial_derivative(f, term.order_index(f.n_vars())), dom)).first;
      for (double t : cfg.t_grid) {
        const EstimateReport r = trace_estimate_check(f, path, term, t, dom, cfg.options, it->second);
        SweepCase c;
        c.seed = seed;
        c.ensemble = label;
        c.term = key;
        c.m = m;
        c.t = t;
        c.lhs = r.lhs;
        c.sound_bound = r.rhs_factor * r.coeff_upper;
        c.ratio = r.ratio;
        c.pass_sound = r.pass_sound;
        c.pass_strict = r.pass_strict;
        c.in_hypothesis = r.in_hypothesis;
        c.theorem_backed = r.in_hypothesis && (cfg.standard_trace || m == 2);
        out.push_back(std::move(c));
      }
    }
  }
}

DrawResult run_draw(const SweepConfig& cfg, int i) {
  DrawResult res;
  EnsembleSpec spec = cfg.ensembles[static_cast<std::size_t>(i) % cfg.ensembles.size()];
  spec.seed = cfg.master_seed + static_cast<std::uint64_t>(i);
  const PerturbationPath path = draw_path(spec, cfg.options.tol);
  FunctionSpec fs = cfg.function;
  fs.n = spec.n;
  fs.seed = function_seed(spec.seed);
  const MultiPoly f = draw_function(fs);
  run_cases(f, path, domain_for(spec.kind, cfg.grid_per_axis), cfg, spec.seed, to_string(spec.kind), res.cases);
  return res;
}

void merge(SweepReport& rep, std::vector<SweepCase>& cases, bool keep) {
  for (auto& c : cases) {
    if (!c.theorem_backed) {
      ++rep.out_of_hypothesis;
      if (!c.pass_sound) ++rep.out_of_hypothesis_sound_violations;
    } else {
      ++rep.total;
      if (c.pass_sound) ++rep.passed_sound;
      if (c.pass_strict) ++rep.passed_strict;
      rep.max_ratio = std::max(rep.max_ratio, c.ratio);
      if (!c.pass_sound) rep.failures.push_back(c);
    }
    if (keep) rep.cases.push_back(std::move(c));
  }
}

}  // namespace

SweepReport estimate_sweep(const SweepConfig& cfg) {
  SweepReport rep;
  if (cfg.draws > 0 && cfg.ensembles.empty())
    throw StructuralError("estimate_sweep: draws requested without ensembles");
  std::vector<DrawResult> results(std::max(0, cfg.draws));
  const int threads = std::max(1, std::min(cfg.threads, std::max(1, cfg.draws)));
  if (threads == 1) {
    for (int i = 0; i < cfg.draws; ++i) results[i] = run_draw(cfg, i);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < cfg.draws; i += threads) results[i] = run_draw(cfg, i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (auto& r : results) merge(rep, r.cases, cfg.keep_cases);

  if (cfg.include_adversarial) {
    for (AdversarialKind kind : {AdversarialKind::NonCommuting, AdversarialKind::NonNormalToeplitz}) {
      const PerturbationPath path = adversarial_path(kind, 4, cfg.options.tol);
      FunctionSpec fs = cfg.function;
      fs.n = path.n();
      fs.seed = function_seed(cfg.master_seed);
      const MultiPoly f = draw_function(fs);
      std::vector<SweepCase> cases;
      run_cases(f, path, domain_for(EnsembleKind::JointlyDiagonal, cfg.grid_per_axis), cfg,
                cfg.master_seed, "adversarial_" + to_string(kind), cases);
      for (auto& c : cases) c.theorem_backed = false;
      merge(rep, cases, cfg.keep_cases);
    }
  }
  return rep;
}

}  // namespace hoss

// hoss: batch verification front end.
//
//   hoss verify  --suite remainder --seed 42 --draws 50 --out report.json
//   hoss moments --term "1^1,2^1" --max-degree 4
//   hoss sweep   --draws 20 --adversarial --max-ratio-csv ratios.csv
//
// Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 usage or
// configuration error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hoss/divdiff.hpp"
#include "hoss/estimates.hpp"
#include "hoss/remainder.hpp"
#include "hoss/serialize.hpp"
#include "hoss/ssm.hpp"

using namespace hoss;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheck = 1;
constexpr int kExitUsage = 2;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSuites = {"divdiff", "derivatives", "remainder", "estimates", "tracefla", "reduction"};

struct RunConfig {
  std::string suite = "all";
  std::uint64_t seed = 0;
  int draws = 20;
  int dim = 4;
  int nvars = 2;
  double v_scale = 0.2;
  std::string ensemble = "all";  // a kind name, or all three in turn
  std::vector<EnsembleSpec> ensembles;  // explicit list from a config file
  FunctionSpec function;
  int m_min = 2;
  int m_max = 4;
  int max_k = 3;
  std::vector<double> t_grid = {0.0, 0.5, 1.0};
  double tol = 0.0;  // 0: each suite uses its own default
  std::string out;
  int threads = 1;
  std::string term;
  int m = 0;
  std::vector<int> max_degree;
  bool adversarial = false;
  std::string max_ratio_csv;
};

void validate(const RunConfig& c) {
  if (c.draws < 0) throw ConfigError("draws must be >= 0");
  if (c.dim < 1 || c.dim > 64) throw ConfigError("dim must lie in [1, 64]");
  if (c.nvars < 1 || c.nvars > 6) throw ConfigError("nvars must lie in [1, 6]");
  if (!(c.v_scale >= 0.0)) throw ConfigError("v_scale must be >= 0");
  if (c.m_min < 1 || c.m_max > 6 || c.m_min > c.m_max) throw ConfigError("m-range must satisfy 1 <= m_min <= m_max <= 6");
  if (c.tol < 0.0 || !std::isfinite(c.tol)) throw ConfigError("tolerances must be > 0");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.max_k < 1) throw ConfigError("max_k must be >= 1");
  if (c.function.max_total_degree < 0) throw ConfigError("function.max_total_degree must be >= 0");
  if (!(c.function.coeff_scale > 0.0)) throw ConfigError("function.coeff_scale must be > 0");
  for (double t : c.t_grid)
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("t_grid values must lie in [0, 1]");
  if (c.suite != "all" && std::find(kSuites.begin(), kSuites.end(), c.suite) == kSuites.end())
    throw ConfigError("unknown suite '" + c.suite + "'");
  if (c.ensemble != "all") parse_ensemble_kind(c.ensemble);
  for (int d : c.max_degree)
    if (d < 0) throw ConfigError("max_degree entries must be >= 0");
}

template <typename T>
void read_key(const Json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

// Keys mirror the long flag names (dashes become underscores).
void apply_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  static const std::vector<std::string> known = {
      "suite", "seed", "draws", "dim", "nvars", "v_scale", "ensemble", "ensembles", "function", "m_min", "m_max",
      "max_k", "t_grid", "tol", "out", "threads", "term", "m", "max_degree", "adversarial", "max_ratio_csv"};
  for (const auto& [key, value] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  try {
    read_key(j, "suite", c.suite);
    read_key(j, "seed", c.seed);
    read_key(j, "draws", c.draws);
    read_key(j, "dim", c.dim);
    read_key(j, "nvars", c.nvars);
    read_key(j, "v_scale", c.v_scale);
    read_key(j, "ensemble", c.ensemble);
    read_key(j, "m_min", c.m_min);
    read_key(j, "m_max", c.m_max);
    read_key(j, "max_k", c.max_k);
    read_key(j, "t_grid", c.t_grid);
    read_key(j, "tol", c.tol);
    if (j.contains("tol") && !(c.tol > 0.0)) throw ConfigError("tol must be > 0");
    read_key(j, "out", c.out);
    read_key(j, "threads", c.threads);
    read_key(j, "term", c.term);
    read_key(j, "m", c.m);
    read_key(j, "max_degree", c.max_degree);
    read_key(j, "adversarial", c.adversarial);
    read_key(j, "max_ratio_csv", c.max_ratio_csv);
    if (j.contains("ensembles")) {
      if (!j["ensembles"].is_array()) throw ConfigError("ensembles must be an array of EnsembleSpec objects");
      for (const auto& e : j["ensembles"]) c.ensembles.push_back(ensemble_spec_from_json(e));
    }
    if (j.contains("function")) {
      const Json& f = j["function"];
      if (!f.is_object()) throw ConfigError("function must be an object");
      read_key(f, "max_total_degree", c.function.max_total_degree);
      read_key(f, "coeff_scale", c.function.coeff_scale);
      read_key(f, "max_var_degree", c.function.max_var_degree);
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  } catch (const StructuralError& e) {
    throw ConfigError(e.what());
  }
}

Json config_json(const RunConfig& c) {
  Json ens = Json::array();
  for (const auto& e : c.ensembles) ens.push_back(to_json(e));
  return Json{{"suite", c.suite},
              {"seed", c.seed},
              {"draws", c.draws},
              {"dim", c.dim},
              {"nvars", c.nvars},
              {"v_scale", c.v_scale},
              {"ensemble", c.ensemble},
              {"ensembles", ens},
              {"function",
               {{"max_total_degree", c.function.max_total_degree},
                {"coeff_scale", c.function.coeff_scale},
                {"max_var_degree", c.function.max_var_degree}}},
              {"m_min", c.m_min},
              {"m_max", c.m_max},
              {"max_k", c.max_k},
              {"t_grid", c.t_grid},
              {"tol", c.tol}};
}

// Ensemble template of draw i; its seed is master + i.
EnsembleSpec ensemble_for(const RunConfig& c, int i) {
  EnsembleSpec s;
  if (!c.ensembles.empty()) {
    s = c.ensembles[static_cast<std::size_t>(i) % c.ensembles.size()];
  } else {
    s.kind = c.ensemble == "all" ? static_cast<EnsembleKind>(i % 3) : parse_ensemble_kind(c.ensemble);
    s.n = c.nvars;
    s.dim = c.dim;
    s.v_scale = c.v_scale;
  }
  s.seed = c.seed + static_cast<std::uint64_t>(i);
  return s;
}

std::vector<EnsembleSpec> ensemble_templates(const RunConfig& c) {
  if (!c.ensembles.empty()) return c.ensembles;
  std::vector<EnsembleSpec> out;
  for (int i = 0; i < (c.ensemble == "all" ? 3 : 1); ++i) out.push_back(ensemble_for(c, i));
  return out;
}

MultiPoly function_for(const RunConfig& c, int n, std::uint64_t seed) {
  FunctionSpec fs = c.function;
  fs.n = n;
  fs.seed = function_seed(seed);
  return draw_function(fs);
}

double tol_or(const RunConfig& c, double fallback) { return c.tol > 0.0 ? c.tol : fallback; }

int m_for(const RunConfig& c, int i) { return c.m_min + i % (c.m_max - c.m_min + 1); }

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

struct CaseResult {
  bool passed = true;
  bool in_hypothesis = true;
  Json record;
};

// One draw of one suite; everything derives from the draw seed.
CaseResult run_case(const std::string& suite, const RunConfig& c, int i) {
  const EnsembleSpec spec = ensemble_for(c, i);
  const PerturbationPath path = draw_path(spec);
  const MultiPoly f = function_for(c, spec.n, spec.seed);
  const int m = m_for(c, i);
  CaseResult r;
  r.record = Json{{"draw", i}, {"seed", spec.seed}, {"ensemble", to_string(spec.kind)}};
  r.in_hypothesis = within_hypotheses(path);

  if (suite == "divdiff") {
    CounterRng rng(spec.seed);
    DividedDiffSpec dd;
    const int var = static_cast<int>(rng.uniform() * spec.n);
    DivDiffCoord coord{var, {}};
    for (int k = 0; k <= m; ++k) coord.nodes.push_back(rng.unit_disc());
    dd.coords.push_back(coord);
    std::vector<Complex> z;
    for (int j = 0; j < spec.n; ++j) z.push_back(rng.unit_disc());
    const Complex a = eval_scalar(divdiff_recursive(f, dd), z);
    const Complex b = eval_scalar(divdiff_apply(f, dd), z);
    const Complex q = divdiff_integral(f, dd, z);
    const double gap = std::max({std::abs(a - b), std::abs(a - q), std::abs(b - q)});
    const double bound = divdiff_bound(f, dd, DomainKind::torus());
    r.passed = gap <= tol_or(c, 1e-10) && std::abs(b) <= bound * (1 + 1e-8) + 1e-14;
    r.record["m"] = m;
    r.record["max_gap"] = gap;
    r.record["value"] = complex_json(b);
    r.record["bound"] = bound;
  } else if (suite == "derivatives") {
    const double t = c.t_grid.empty() ? 0.5 : c.t_grid[static_cast<std::size_t>(i) % c.t_grid.size()];
    const CMatrix exact = full_derivative(f, path, m, t);
    const CMatrix fd = richardson_difference(f, path, m, t, default_fd_step(m),
                                             exact_richardson_levels(std::max(0, f.total_degree()), m));
    const double scale = std::max(exact.norm(), 1e-300);
    const double err = m > f.total_degree() ? fd.norm() : (fd - exact).norm() / scale;
    r.passed = m > f.total_degree() ? exact.norm() == 0.0 : err <= tol_or(c, 1e-5);
    r.record["m"] = m;
    r.record["t"] = t;
    r.record["relative_error"] = err;
  } else if (suite == "remainder") {
    const auto rep = remainder_check(f, path, m, tol_or(c, 1e-9));
    r.passed = rep.passed;
    r.record["report"] = to_json(rep);
  } else if (suite == "estimates") {
    const DomainKind dom = spec.kind == EnsembleKind::SelfAdjointDiagonal ? DomainKind::cube() : DomainKind::torus();
    EstimateOptions opts;
    if (c.tol > 0.0) opts.slack = c.tol;
    long long cases = 0, sound = 0, strict = 0;
    double max_ratio = 0.0;
    Json failed = Json::array();
    for (int mm = c.m_min; mm <= c.m_max; ++mm)
      for (const auto& term : derivative_terms(spec.n, mm, c.max_k))
        for (double t : c.t_grid) {
          const auto e = trace_estimate_check(f, path, term, t, dom, opts);
          ++cases;
          sound += e.pass_sound;
          strict += e.pass_strict;
          max_ratio = std::max(max_ratio, e.ratio);
          if (!e.pass_sound) failed.push_back(Json{{"term", term.to_string()}, {"t", t}, {"lhs", e.lhs}});
        }
    r.passed = sound == cases;
    r.record["cases"] = cases;
    r.record["passed_sound"] = sound;
    r.record["passed_strict"] = strict;
    r.record["max_ratio"] = max_ratio;
    if (!failed.empty()) r.record["failed_terms"] = failed;
  } else if (suite == "tracefla") {
    const auto rep = trace_formula_check(f, path, m, tol_or(c, 1e-9));
    r.passed = rep.passed;
    r.record["report"] = to_json(rep);
  } else if (suite == "reduction") {
    FunctionSpec gs = c.function;
    gs.n = 1;
    gs.seed = function_seed(spec.seed) + 1;
    const auto rep = single_variable_reduction(draw_function(gs), i % spec.n, m, path, tol_or(c, 1e-10));
    r.passed = rep.passed;
    r.record["coordinate"] = i % spec.n + 1;
    r.record["m"] = m;
    r.record["report"] = to_json(rep);
  }
  r.record["passed"] = r.passed;
  r.record["in_hypothesis"] = r.in_hypothesis;
  return r;
}

// Runs draws [0, draws) over a pool of threads; results are stored by draw index.
template <typename F>
void parallel_draws(int draws, int threads, F&& body) {
  threads = std::max(1, std::min(threads, draws));
  if (threads <= 1) {
    for (int i = 0; i < draws; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < draws; i += threads) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void emit(const RunConfig& c, const Json& report) {
  const std::string text = report.dump(2) + "\n";
  if (c.out.empty())
    std::cout << text;
  else
    write_atomic(c.out, text);
}

int cmd_verify(const RunConfig& c) {
  const std::vector<std::string> suites = c.suite == "all" ? kSuites : std::vector<std::string>{c.suite};
  Json report{{"schema", 1}, {"command", "verify"}, {"config", config_json(c)}};
  Json per_suite = Json::object();
  std::vector<std::uint64_t> failing;
  long long total_failed = 0;
  for (const auto& s : suites) {
    std::vector<CaseResult> results(static_cast<std::size_t>(c.draws));
    parallel_draws(c.draws, c.threads, [&](int i) { results[i] = run_case(s, c, i); });
    long long passed = 0, failed = 0, outside = 0;
    Json cases = Json::array();
    for (auto& r : results) {
      if (!r.in_hypothesis) {
        ++outside;
      } else if (r.passed) {
        ++passed;
      } else {
        ++failed;
        failing.push_back(r.record["seed"].get<std::uint64_t>());
      }
      cases.push_back(std::move(r.record));
    }
    total_failed += failed;
    per_suite[s] = Json{{"passed", passed}, {"failed", failed}, {"out_of_hypothesis", outside}, {"cases", cases}};
    std::fprintf(stderr, "%-12s %lld passed, %lld failed, %lld out of hypothesis\n", s.c_str(), passed, failed, outside);
  }
  report["suites"] = per_suite;
  report["failing_seeds"] = failing;
  report["status"] = total_failed ? "fail" : "pass";
  emit(c, report);
  if (total_failed) {
    std::fprintf(stderr, "failing seeds:");
    for (auto s : failing) std::fprintf(stderr, " %llu", static_cast<unsigned long long>(s));
    std::fprintf(stderr, "\n");
    return kExitCheck;
  }
  return kExitPass;
}

int cmd_moments(const RunConfig& c) {
  if (c.term.empty()) throw ConfigError("moments needs --term");
  DerivTermSpec term;
  try {
    term = parse_term(c.term);
  } catch (const StructuralError& e) {
    throw ConfigError(e.what());
  }
  if (c.m > 0 && c.m != term.total_order())
    throw ConfigError("--m " + std::to_string(c.m) + " differs from the order of term " + c.term);
  const EnsembleSpec spec = ensemble_for(c, 0);
  for (const auto& tc : term.coords)
    if (tc.var >= spec.n) throw ConfigError("term coordinate " + std::to_string(tc.var + 1) + " exceeds nvars");
  MultiIndex maxdeg = c.max_degree;
  if (maxdeg.empty()) maxdeg.assign(spec.n, 4);
  if (maxdeg.size() == 1 && spec.n > 1) maxdeg.assign(spec.n, maxdeg.front());
  if (static_cast<int>(maxdeg.size()) != spec.n) throw ConfigError("max_degree needs one entry per variable");

  const PerturbationPath path = draw_path(spec);
  const MomentTable table = moment_table(term, path, maxdeg);
  double max_entry = 0.0;
  for (const auto& [a, v] : table.entries) max_entry = std::max(max_entry, std::abs(v));
  const int violations = moment_table_violations(table, c.tol > 0.0 ? c.tol : 1e-8);

  Json out = to_json(table);
  out["schema"] = 1;
  out["ensemble"] = to_json(spec);
  out["audit_violations"] = violations;
  emit(c, out);
  std::FILE* sink = c.out.empty() ? stderr : stdout;
  std::fprintf(sink, "tv_bound %.17g\nmax |entry| %.17g\naudit violations %d\n", table.tv_bound, max_entry, violations);
  return violations ? kExitCheck : kExitPass;
}

int cmd_sweep(const RunConfig& c) {
  SweepConfig sc;
  sc.ensembles = ensemble_templates(c);
  sc.draws = c.draws;
  sc.function = c.function;
  sc.m_min = c.m_min;
  sc.m_max = c.m_max;
  sc.max_k = c.max_k;
  sc.t_grid = c.t_grid;
  sc.master_seed = c.seed;
  sc.include_adversarial = c.adversarial;
  sc.threads = c.threads;
  sc.keep_cases = !c.max_ratio_csv.empty();
  if (c.tol > 0.0) sc.options.slack = c.tol;
  const SweepReport rep = estimate_sweep(sc);
  Json out = to_json(rep);
  out["command"] = "sweep";
  out["config"] = config_json(c);
  emit(c, out);
  if (!c.max_ratio_csv.empty()) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "seed,ensemble,term,m,t,ratio\n";
    for (const auto& k : rep.cases)
      csv << k.seed << ',' << k.ensemble << ",\"" << k.term << "\"," << k.m << ',' << k.t << ',' << k.ratio << '\n';
    write_atomic(c.max_ratio_csv, csv.str());
  }
  std::fprintf(stderr, "%lld cases, %lld sound, %lld strict, max ratio %.6f, %lld out of hypothesis (%lld violations)\n",
               rep.total, rep.passed_sound, rep.passed_strict, rep.max_ratio, rep.out_of_hypothesis,
               rep.out_of_hypothesis_sound_violations);
  return rep.passed_sound == rep.total ? kExitPass : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order operator derivative, remainder and trace-estimate verification"};
  app.require_subcommand(1);
  RunConfig flags;
  std::string config_path;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with run settings; flags override it");
    sub->add_option("--seed", flags.seed, "master seed; draw i uses seed + i");
    sub->add_option("--draws", flags.draws, "number of random draws");
    sub->add_option("--dim", flags.dim, "matrix size");
    sub->add_option("--nvars", flags.nvars, "number of variables n");
    sub->add_option("--v-scale", flags.v_scale, "perturbation size");
    sub->add_option("--ensemble", flags.ensemble,
                    "jointly_diagonal, circulant, self_adjoint_diagonal or all");
    sub->add_option("--m-min", flags.m_min, "smallest derivative order");
    sub->add_option("--m-max", flags.m_max, "largest derivative order");
    sub->add_option("--tol", flags.tol, "tolerance override (> 0)");
    sub->add_option("--out", flags.out, "report path (written atomically); default stdout");
    sub->add_option("--threads", flags.threads, "worker threads over draws");
  };

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  common(verify);
  verify->add_option("--suite", flags.suite, "divdiff|derivatives|remainder|estimates|tracefla|reduction|all");

  auto* moments = app.add_subcommand("moments", "moment table of one spectral shift functional");
  common(moments);
  moments->add_option("--term", flags.term, "term such as \"1^2,3^1\"");
  moments->add_option("--m", flags.m, "expected total order of the term");
  moments->add_option("--max-degree", flags.max_degree, "largest exponent per variable (one value or one per variable)")
      ->delimiter(',');

  auto* sweep = app.add_subcommand("sweep", "trace-estimate sweep with sharpness telemetry");
  common(sweep);
  sweep->add_flag("--adversarial", flags.adversarial, "add out-of-hypothesis probes (reported separately)");
  sweep->add_option("--max-ratio-csv", flags.max_ratio_csv, "write per-case ratios as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    // explicitly given flags take precedence over the file
    auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
    if (given("--seed")) cfg.seed = flags.seed;
    if (given("--draws")) cfg.draws = flags.draws;
    if (given("--dim")) cfg.dim = flags.dim;
    if (given("--nvars")) cfg.nvars = flags.nvars;
    if (given("--v-scale")) cfg.v_scale = flags.v_scale;
    if (given("--ensemble")) cfg.ensemble = flags.ensemble;
    if (given("--m-min")) cfg.m_min = flags.m_min;
    if (given("--m-max")) cfg.m_max = flags.m_max;
    if (given("--tol")) {
      if (!(flags.tol > 0.0)) throw ConfigError("--tol must be > 0");
      cfg.tol = flags.tol;
    }
    if (given("--out")) cfg.out = flags.out;
    if (given("--threads")) cfg.threads = flags.threads;
    if (given("--suite")) cfg.suite = flags.suite;
    if (given("--term")) cfg.term = flags.term;
    if (given("--m")) cfg.m = flags.m;
    if (given("--max-degree")) cfg.max_degree = flags.max_degree;
    if (given("--adversarial")) cfg.adversarial = true;
    if (given("--max-ratio-csv")) cfg.max_ratio_csv = flags.max_ratio_csv;
    validate(cfg);

    if (sub == verify) return cmd_verify(cfg);
    if (sub == moments) return cmd_moments(cfg);
    return cmd_sweep(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const StructuralError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
}

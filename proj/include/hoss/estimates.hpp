#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hoss/ensembles.hpp"
#include "hoss/opderiv.hpp"

namespace hoss {

/// Whether X(t) satisfies the hypotheses of the trace estimate: commuting
/// normal contractions (self-adjoint as well for the Cube domain).
struct HypothesisStatus {
  bool commuting = false;
  bool normal = false;
  bool contraction = false;
  bool self_adjoint = false;
  bool ok = false;
  std::string note;
};

HypothesisStatus hypotheses_at(const PerturbationPath& path, double t, Domain domain,
                               const Tolerances& tol = {});

struct EstimateReport {
  DerivTermSpec term;
  double t = 0.0;
  double lhs = 0.0;         ///< |tr D_f^{term}(t)|
  double rhs_factor = 0.0;  ///< prod ||V_{j_l}||_2^{i_l}
  double grid_sup = 0.0;    ///< of the m-th partial derivative
  double coeff_upper = 0.0;
  int grid_used = 0;
  double ratio = 0.0;       ///< lhs / (rhs_factor * grid_sup), sharpness telemetry
  bool pass_strict = false;
  bool pass_sound = false;
  bool in_hypothesis = false;
  std::string note;
};

struct EstimateOptions {
  double slack = 1e-8;
  int max_grid = 512;
  Tolerances tol;
};

/// |tr D_f(t)| <= prod ||V_{j_l}||_2^{i_l} * sup |d^m f|. The sound side uses
/// the coefficient sum, the strict side the grid sup (refined before failing).
/// known_sup, when given, is the SupNorm of the m-th partial at dom.
EstimateReport trace_estimate_check(const MultiPoly& f, const PerturbationPath& path,
                                    const DerivTermSpec& term, double t, const DomainKind& dom,
                                    const EstimateOptions& opts = {},
                                    const std::optional<SupNorm>& known_sup = std::nullopt);

struct HsBlockReport {
  double lhs = 0.0;  ///< sum over index tuples of |tr(E_1 V_1 ... E_m V_m)|
  double rhs = 0.0;  ///< prod ||V_j||_2
  long long tuples = 0;
  bool passed = false;
};

/// Checks the block Hilbert-Schmidt bound for m = v.size() >= 2. Each family
/// must be a resolution of the identity by orthogonal projectors.
HsBlockReport hs_block_bound_check(const std::vector<std::vector<CMatrix>>& partitions,
                                   const std::vector<CMatrix>& v, double tol = 1e-9);

struct SweepConfig {
  std::vector<EnsembleSpec> ensembles;  ///< templates; seeds are set per draw
  int draws = 0;
  FunctionSpec function;                ///< n and seed are set per draw
  int m_min = 2;
  int m_max = 4;
  int max_k = 3;
  std::vector<double> t_grid = {0.0, 0.5, 1.0};
  int grid_per_axis = 0;  ///< 0: 64 on Torus, 65 on Cube
  std::uint64_t master_seed = 0;
  bool include_adversarial = false;
  bool standard_trace = true;  ///< false: only m = 2 counts as theorem-backed
  int threads = 1;
  bool keep_cases = false;
  EstimateOptions options;
};

struct SweepCase {
  std::uint64_t seed = 0;
  std::string ensemble;
  std::string term;
  int m = 0;
  double t = 0.0;
  double lhs = 0.0;
  double sound_bound = 0.0;
  double ratio = 0.0;
  bool pass_sound = false;
  bool pass_strict = false;
  bool in_hypothesis = false;
  bool theorem_backed = false;
};

struct SweepReport {
  long long total = 0;  ///< theorem-backed, in-hypothesis cases
  long long passed_sound = 0;
  long long passed_strict = 0;
  long long out_of_hypothesis = 0;  ///< segregated, never counted in total
  long long out_of_hypothesis_sound_violations = 0;
  double max_ratio = 0.0;
  std::vector<SweepCase> failures;
  std::vector<SweepCase> cases;  ///< every case when keep_cases is set
};

/// Seed of draw i is master_seed + i; results are merged in draw order.
SweepReport estimate_sweep(const SweepConfig& config);

std::uint64_t function_seed(std::uint64_t draw_seed);

}  // namespace hoss

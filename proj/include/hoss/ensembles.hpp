#pragma once

#include <cstdint>
#include <string>

#include "hoss/mpoly.hpp"

namespace hoss {

/// SplitMix64 in counter mode: the k-th output is mix(seed + (k+1) * gamma),
/// so a stream is a pure function of (seed, k) and identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller.
  double normal();
  Complex complex_normal();
  /// Uniform on the closed disc of the given radius.
  Complex unit_disc(double radius = 1.0);
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

enum class EnsembleKind { JointlyDiagonal, Circulant, SelfAdjointDiagonal };

std::string to_string(EnsembleKind k);
EnsembleKind parse_ensemble_kind(const std::string& s);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::JointlyDiagonal;
  int n = 2;
  int dim = 4;
  double v_scale = 0.2;
  std::uint64_t seed = 0;
};

/// Haar unitary via QR of a complex Gaussian matrix with the phase fix.
CMatrix haar_unitary(int dim, CounterRng& rng);

/// Unitary DFT matrix; its conjugations of diagonals are the circulants.
CMatrix dft_matrix(int dim);

/// A commuting normal contraction pair whose whole path stays inside the hypotheses.
PerturbationPath draw_path(const EnsembleSpec& spec, const Tolerances& tol = {});

struct FunctionSpec {
  int n = 2;
  int max_total_degree = 4;
  double coeff_scale = 1.0;
  std::uint64_t seed = 0;
  int max_var_degree = -1;  ///< optional per-variable cap, < 0 means none
};

/// Every monomial with |k| <= max_total_degree and complex Gaussian
/// coefficient scaled by coeff_scale / (1 + |k|)^2.
MultiPoly draw_function(const FunctionSpec& spec);

enum class AdversarialKind { NonCommuting, NonNormalToeplitz };

std::string to_string(AdversarialKind k);

/// Deliberately leaves the hypotheses: a non-commuting perturbation of a 2x2
/// pair, or a commuting, non-normal family of polynomials in the nilpotent shift.
PerturbationPath adversarial_path(AdversarialKind kind, int dim = 4, const Tolerances& tol = {});

/// `parts` mutually orthogonal projectors summing to I, spanned by random
/// groups of columns of a Haar unitary. Every group is non-empty.
std::vector<CMatrix> random_projector_partition(int dim, int parts, CounterRng& rng);

/// Spectral projectors of a normal matrix, eigenvalues merged within tol.
std::vector<CMatrix> eigenprojector_partition(const CMatrix& normal, double tol = 1e-9);

}  // namespace hoss

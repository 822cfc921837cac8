#include "hoss/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace hoss {

namespace {

QuadratureRule compute_rule(int q) {
  // Newton iteration on P_q from the Chebyshev initial guess, then map [-1,1] -> [0,1].
  QuadratureRule r;
  r.nodes.resize(q);
  r.weights.resize(q);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pq = q == 0 ? 1.0 : (q == 1 ? x : p1);
      const double pqm1 = q == 1 ? 1.0 : p0;
      dp = q * (x * pq - pqm1) / (x * x - 1.0);
      const double dx = pq / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= q; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double pq = q == 1 ? x : p1;
    const double pqm1 = q == 1 ? 1.0 : p0;
    dp = q * (x * pq - pqm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = 0.5 * (1.0 - x);
    r.nodes[q - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = 0.5 * w;
    r.weights[q - 1 - i] = 0.5 * w;
  }
  return r;
}

}  // namespace

QuadratureRule gauss_legendre_unit(int q) {
  if (q < 1) throw std::domain_error("gauss_legendre_unit: q must be >= 1");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, compute_rule(q)).first;
  return it->second;
}

}  // namespace hoss

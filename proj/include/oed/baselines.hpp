#pragma once

#include <optional>
#include <string>

#include "oed/relax.hpp"
#include "oed/rng.hpp"
#include "oed/types.hpp"

namespace oed {

// Dense RBF kernel k(x_i, x_j) = exp(-0.5 (||x_i - x_j|| / gamma)^2).
struct KernelMatrix {
  Matrix entries;
  double gamma = 0.0;
};

enum class BaselineMethod {
  Uniform,
  MaxWeights,
  WeightedSampling,
  GreedyARemoval,
  MmdCritic,
  KMeans,
  PivotedQr,
};

BaselineMethod parse_baseline(std::string_view name);
std::string baseline_name(BaselineMethod method);

struct BaselineConfig {
  BaselineMethod method = BaselineMethod::Uniform;
  int trials = 1;
  RngSeed seed;
  int greedy_initial_factor = 10;
  std::optional<double> kernel_gamma;  // overrides the median heuristic
  int kmeans_max_iters = 100;

  void validate() const {
    if (trials < 1) throw ArgumentError("baseline: trials must be >= 1");
  }
};

Selection select_uniform(const DesignPool& pool, long k, RngSeed seed);

// Indices of the k largest relaxed weights; ties by lowest index.
Selection select_max_weights(const RelaxedSolution& relaxed, long k);

// k i.i.d. draws from pi/k (with replacement unless distinct is set).
Selection select_weighted_sampling(const RelaxedSolution& relaxed, long k,
                                   RngSeed seed, bool distinct = false);

// Start from a random working set of size max(initial_factor*d, k) and
// greedily remove the point whose removal keeps the inverse-trace lowest,
// tracked by rank-one downdates.
Selection select_greedy_a_removal(const DesignPool& pool, long k,
                                  int initial_factor, RngSeed seed);

double mmd_objective(const KernelMatrix& kernel, const Selection& s);

// Dense kernel with the median-distance bandwidth unless overridden.
// Refuses n > max_points unless the guard is raised explicitly.
KernelMatrix rbf_kernel(const DesignPool& pool,
                        std::optional<double> gamma_override = std::nullopt,
                        long max_points = 20000);

Selection select_mmd_critic(const DesignPool& pool, long k,
                            std::optional<double> gamma_override = std::nullopt,
                            long max_points = 20000);

Selection select_kmeans(const DesignPool& pool, long k, RngSeed seed,
                        int max_iters = 100);

// Column-pivoted orthogonalization of X^T; the first k pivots.
Selection select_pivoted_qr(const DesignPool& pool, long k);

}  // namespace oed

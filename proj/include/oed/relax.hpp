#pragma once

#include <vector>

#include "oed/criteria.hpp"

namespace oed {

enum class StepRule { Fixed, Decaying };

struct MirrorDescentConfig {
  int max_iters = 20000;
  double rel_tol = 1e-5;
  StepRule step_rule = StepRule::Decaying;
  // Fixed: the step itself.  Decaying: multiplier c of the schedule
  // c * sqrt(log n) / (G_inf * sqrt(t)) with G_inf a running max of the
  // gradient infinity norm.
  double step_param = 1.0;
  long budget_k = 0;
  double ridge_lambda = 0.0;

  void validate() const;
};

struct RelaxedSolution {
  Vector pi;              // nonnegative, sums to k
  Vector omega;           // pi / k, on the probability simplex
  double objective_value = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // accepted objective value per iteration
  bool converged = false;
};

// Multiplicative update omega_i * exp(-gamma * g_i), max-subtracted before
// exponentiation, renormalized onto the simplex.
Vector mirror_step(const Vector& omega, const Vector& grad, double gamma);

RelaxedSolution solve_relaxed(const DesignPool& pool, const Criterion& c,
                              const MirrorDescentConfig& cfg);

}  // namespace oed

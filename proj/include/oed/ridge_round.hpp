#pragma once

#include "oed/ftrl.hpp"

namespace oed {

// Shifted action matrix for the regularized loss, with its square root.
struct RidgeShiftedAction {
  SpdMatrix matrix;       // B_t
  SpdMatrix sqrt_matrix;  // B_t^{1/2}
};

// Entropy: B = exp(log A - alpha * d_tilde), from a fresh decomposition of
// the exponent.  l1/2: B = (A^{-1/2} + alpha * d_tilde)^{-2}.
RidgeShiftedAction ridge_b_matrix(const SpdMatrix& action,
                                  const SpdMatrix& d_tilde, Regularizer reg,
                                  double alpha);

double ridge_selection_score(Regularizer reg, double alpha,
                             const RidgeShiftedAction& shifted,
                             const Vector& x_tilde_i, double norm_sq_i);

// Loss matrices x x^T + (lambda/k) sigma_diamond^{-1}; certificate
// tau = lambda_min(Xt^T S Xt + lambda sigma_diamond^{-1}); objective
// f(X_S^T X_S + lambda I).
SelectionResult run_ridge_regret_min(const DesignPool& pool,
                                     const RelaxedSolution& relaxed,
                                     const Criterion& c, Regularizer reg,
                                     double alpha, long k, double lambda,
                                     bool with_replacement = false);

// Per-step greedy lower bounds: entropy needs k >= alpha*d to be binding
// (checked informationally otherwise), l1/2 holds unconditionally.
BoundReport verify_ridge_per_step_bounds(const SelectionResult& run,
                                         Regularizer reg, double alpha, long k,
                                         Index d);

}  // namespace oed

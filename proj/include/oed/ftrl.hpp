#pragma once

#include <limits>
#include <string>
#include <vector>

#include "oed/criteria.hpp"
#include "oed/relax.hpp"

namespace oed {

enum class Regularizer { Entropy, LHalf };

Regularizer parse_regularizer(std::string_view name);
std::string regularizer_name(Regularizer reg);

// Pool after the change of basis that puts the relaxed-weight covariance
// at the identity (minus lambda * sigma_diamond^{-1} in ridge mode).
struct WhitenedPool {
  SpdMatrix sigma_diamond;
  SpdMatrix sigma_inv;
  SpdMatrix sigma_inv_sqrt;
  Matrix x_tilde;        // n x d rows of transformed points
  Vector tilde_norms_sq;
};

WhitenedPool whiten(const DesignPool& pool, const RelaxedSolution& relaxed,
                    double ridge_lambda);

// Trace-one action matrix chosen by FTRL for the accumulated (already
// alpha-scaled) loss, together with its square root and the normalizing
// constant nu.
struct FtrlAction {
  SpdMatrix matrix;
  SpdMatrix sqrt_matrix;
  double nu = 0.0;
};

FtrlAction ftrl_action(const SpdMatrix& loss_sum, Regularizer reg,
                       double alpha);

// Greedy score of one candidate point under the current action.
double selection_score(Regularizer reg, double alpha, const FtrlAction& action,
                       const Vector& x_tilde_i, double norm_sq_i);

struct StepRecord {
  Index index = -1;
  double score = 0.0;          // score of the chosen point
  double max_score_all = 0.0;  // max score over the whole pool
  double loss_inner = 0.0;     // <A_t, F_t>
  double loss_inner_sqrt = 0.0;  // <A_t^{1/2}, F_t>
  double norm_sq = 0.0;        // squared whitened norm of the chosen point
  double nu = 0.0;
  double trace_offset = 0.0;   // Tr(A-B) / Tr(A^{1/2}-B^{1/2}); 0 when unregularized
  double lambda_min_prefix = 0.0;
  double regret_prefix = 0.0;
};

struct SelectionResult {
  Selection selection;
  double tau = 0.0;                 // lambda_min certificate
  double objective_selected = 0.0;  // f at the selected covariance
  double objective_relaxed = 0.0;   // copied from the relaxed solution
  double relative_objective = 0.0;
  double regret = 0.0;
  double c1_diagnostic = 0.0;  // entropy only; NaN for l1/2
  double alpha_used = 0.0;
  double ridge_lambda = 0.0;
  Regularizer regularizer = Regularizer::Entropy;
  std::vector<StepRecord> steps;
};

SelectionResult run_regret_min(const DesignPool& pool,
                               const RelaxedSolution& relaxed,
                               const Criterion& c, Regularizer reg,
                               double alpha, long k,
                               bool with_replacement = false);

struct BoundReport {
  bool passed = true;
  bool enforced = true;  // informational-only checks set this to false
  double min_margin = std::numeric_limits<double>::infinity();
  int worst_step = -1;
  std::vector<double> margins;
};

// Checks lambda_min(sum_{s<=t} F_s) against its accumulated lower bound at
// every prefix (slack 1e-8).
BoundReport verify_lambda_min_bound(const SelectionResult& run,
                                    Regularizer reg, double alpha, Index d);

enum class PrescriptionMode { EntropyA, EntropyB, LHalfC };

struct Prescription {
  double alpha = 0.0;
  long k_min = 0;
};

// Learning rate and minimum budget for a target accuracy epsilon.
// EntropyB needs a data-dependent constant estimate (>= 2).
Prescription prescribe_parameters(Index d, double epsilon,
                                  PrescriptionMode mode,
                                  double c1_estimate = 0.0);

// 2 / (1 - exp(-alpha * min_t ||x_{i_t}||^2 in the whitened norm)).
double c1_diagnostic(const SelectionResult& run, double alpha);

namespace detail {
// Shared engine behind the plain and ridge rounders; lambda == 0 runs the
// exact unregularized path.
SelectionResult run_rounding(const DesignPool& pool,
                             const RelaxedSolution& relaxed,
                             const Criterion& c, Regularizer reg, double alpha,
                             long k, double lambda, bool with_replacement);
}  // namespace detail

}  // namespace oed

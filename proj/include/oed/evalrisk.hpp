#pragma once

#include <vector>

#include "oed/rng.hpp"
#include "oed/types.hpp"

namespace oed {

// Multiclass logistic model with an implicit zero row for the last class:
// p(y|x) = exp(theta_y . x) / (1 + sum_l exp(theta_l . x)) for y < c,
// and 1 / (1 + sum_l exp(theta_l . x)) for the reference class y = c.
// Labels run 1..c.
struct LogisticModel {
  Matrix theta;  // (c-1) x d
  int num_classes = 2;

  Index dim() const { return theta.cols(); }
  void validate() const;
};

struct LabeledSet {
  std::vector<Index> indices;  // into a DesignPool
  std::vector<int> labels;     // in [1, c]

  void validate(Index n, int num_classes) const;
};

// Class probabilities for one point, stable under large logits.
Vector class_probabilities(const LogisticModel& model, const Vector& x);

// f_V = (k/n) <(X_S^T X_S)^{-1}, X^T X>
double v_objective(const DesignPool& pool, const Selection& s);

LabeledSet sample_labels(const DesignPool& pool, const Selection& s,
                         const LogisticModel& theta_star, RngSeed seed);

// Penalized maximum likelihood: (1/k) sum nll + (l2/2) ||theta||_F^2,
// damped Newton with Armijo backtracking, stopping at gradient norm 1e-7
// or 1000 iterations.  No intercept.  Optional inverse-frequency class
// weighting.
LogisticModel fit_logistic(const DesignPool& pool, const LabeledSet& data,
                           double l2_strength, int num_classes,
                           bool class_balanced = false);

// (1/n) sum_x sum_y p(y|x, theta_star) * nll(y|x, theta): the exact inner
// expectation, no label sampling.
double expected_loss(const DesignPool& pool, const LogisticModel& theta,
                     const LogisticModel& theta_star);

struct RiskStudyRecord {
  long budget = 0;
  int subset_id = 0;
  double f_v = 0.0;
  double mean_excess_risk = 0.0;
  int redraws = 0;
};

struct RiskStudyBudgetSummary {
  long budget = 0;
  int subsets_used = 0;
  int subsets_skipped = 0;  // singular selection Gram
  double pearson = 0.0;
  double spearman = 0.0;
};

struct RiskStudyReport {
  std::vector<RiskStudyRecord> records;
  std::vector<RiskStudyBudgetSummary> budgets;
};

RiskStudyReport risk_correlation_study(const DesignPool& pool,
                                       const LogisticModel& theta_star,
                                       const std::vector<long>& budgets,
                                       int subsets_per_budget,
                                       int label_redraws, double l2_strength,
                                       RngSeed seed);

struct AccuracyReport {
  double accuracy = 0.0;
  int classes_covered = 0;
};

// Fit on the selected labeled points, predict argmax class over the whole
// pool, report the fraction matching labels_full.
AccuracyReport evaluate_selection_accuracy(const DesignPool& pool,
                                           const Selection& s,
                                           const std::vector<int>& labels_full,
                                           double l2_strength,
                                           bool class_balanced = false);

// Sample Pearson correlation and Spearman rank correlation.
double pearson_correlation(const std::vector<double>& a,
                           const std::vector<double>& b);
double spearman_correlation(const std::vector<double>& a,
                            const std::vector<double>& b);

}  // namespace oed

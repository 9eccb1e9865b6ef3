#include "oed/ridge_round.hpp"

#include <cmath>
#include <string>

namespace oed {

RidgeShiftedAction ridge_b_matrix(const SpdMatrix& action,
                                  const SpdMatrix& d_tilde, Regularizer reg,
                                  double alpha) {
  if (action.dim() != d_tilde.dim())
    throw ArgumentError("ridge_b_matrix: dimension mismatch");
  if (!(alpha > 0.0)) throw ArgumentError("ridge_b_matrix: alpha must be > 0");
  if (reg == Regularizer::Entropy) {
    const SpdMatrix log_a = spd_log(action);
    const SpdMatrix exponent = SpdMatrix::from_symmetric(
        log_a.entries() - alpha * d_tilde.entries());
    const EigenDecomposition eig = sym_eigen(exponent);
    const Matrix& v = eig.eigenvectors;
    const Vector e = eig.eigenvalues.array().exp();
    const Vector eh = (eig.eigenvalues.array() * 0.5).exp();
    return {SpdMatrix::from_symmetric(v * e.asDiagonal() * v.transpose()),
            SpdMatrix::from_symmetric(v * eh.asDiagonal() * v.transpose())};
  }
  const SpdMatrix a_inv_sqrt = spd_inv_sqrt(action);
  const SpdMatrix shifted = SpdMatrix::from_symmetric(
      a_inv_sqrt.entries() + alpha * d_tilde.entries());
  const EigenDecomposition eig = sym_eigen(shifted);
  if (eig.min_eigenvalue() <= 0.0)
    throw NumericError("ridge_b_matrix: shifted inverse root lost positive "
                       "definiteness (lambda_min " +
                       std::to_string(eig.min_eigenvalue()) + ")");
  const Matrix& v = eig.eigenvectors;
  const Vector b = eig.eigenvalues.array().square().inverse();
  const Vector bh = eig.eigenvalues.array().inverse();
  return {SpdMatrix::from_symmetric(v * b.asDiagonal() * v.transpose()),
          SpdMatrix::from_symmetric(v * bh.asDiagonal() * v.transpose())};
}

double ridge_selection_score(Regularizer reg, double alpha,
                             const RidgeShiftedAction& shifted,
                             const Vector& x_tilde_i, double norm_sq_i) {
  if (norm_sq_i <= 0.0) return -std::numeric_limits<double>::infinity();
  const double q = x_tilde_i.dot(shifted.matrix.entries() * x_tilde_i);
  if (reg == Regularizer::Entropy)
    return (1.0 - std::exp(-alpha * norm_sq_i)) * q / norm_sq_i;
  const double qh = x_tilde_i.dot(shifted.sqrt_matrix.entries() * x_tilde_i);
  return q / (1.0 + alpha * qh);
}

SelectionResult run_ridge_regret_min(const DesignPool& pool,
                                     const RelaxedSolution& relaxed,
                                     const Criterion& c, Regularizer reg,
                                     double alpha, long k, double lambda,
                                     bool with_replacement) {
  if (!(lambda > 0.0))
    throw ArgumentError("run_ridge_regret_min: lambda must be positive");
  return detail::run_rounding(pool, relaxed, c, reg, alpha, k, lambda,
                              with_replacement);
}

BoundReport verify_ridge_per_step_bounds(const SelectionResult& run,
                                         Regularizer reg, double alpha, long k,
                                         Index d) {
  constexpr double kSlack = 1e-9;
  const double kk = static_cast<double>(k);
  const double dd = static_cast<double>(d);
  BoundReport report;
  report.margins.reserve(run.steps.size());
  double rhs;
  if (reg == Regularizer::Entropy) {
    rhs = 1.0 / (kk + alpha * dd);
    report.enforced = kk >= alpha * dd;
  } else {
    rhs = (1.0 - alpha / (2.0 * kk)) / (kk + alpha * std::sqrt(dd));
    report.enforced = true;
  }
  int t = 0;
  for (const StepRecord& rec : run.steps) {
    const double lhs = reg == Regularizer::Entropy
                           ? (rec.trace_offset + rec.max_score_all) / alpha
                           : rec.trace_offset / alpha + rec.max_score_all;
    const double margin = lhs - rhs;
    report.margins.push_back(margin);
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.worst_step = t;
    }
    if (margin < -kSlack && report.enforced) report.passed = false;
    ++t;
  }
  return report;
}

}  // namespace oed

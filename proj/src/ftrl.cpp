#include "oed/ftrl.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "oed/ridge_round.hpp"

namespace oed {

Regularizer parse_regularizer(std::string_view name) {
  if (name == "entropy" || name == "Entropy") return Regularizer::Entropy;
  if (name == "l12" || name == "l1/2" || name == "lhalf")
    return Regularizer::LHalf;
  throw ArgumentError("unknown regularizer '" + std::string(name) +
                      "' (expected entropy|l12)");
}

std::string regularizer_name(Regularizer reg) {
  return reg == Regularizer::Entropy ? "entropy" : "l12";
}

WhitenedPool whiten(const DesignPool& pool, const RelaxedSolution& relaxed,
                    double ridge_lambda) {
  if (ridge_lambda < 0.0)
    throw ArgumentError("whiten: ridge_lambda must be nonnegative");
  if (relaxed.pi.size() != pool.n())
    throw ArgumentError("whiten: weight vector does not match the pool");
  Matrix sigma = covariance(pool, relaxed.pi).entries();
  if (ridge_lambda > 0.0)
    sigma += ridge_lambda * Matrix::Identity(pool.d(), pool.d());
  const SpdMatrix sigma_spd = SpdMatrix::from_symmetric(sigma);
  const EigenDecomposition eig = sym_eigen(sigma_spd);
  if (!(eig.min_eigenvalue() > kSingularityRatio * eig.max_eigenvalue()) ||
      eig.max_eigenvalue() <= 0.0)
    throw SingularMatrixError(
        "whiten: weighted covariance is singular (lambda_min " +
        std::to_string(eig.min_eigenvalue()) +
        "); rerun with ridge_lambda > 0");

  WhitenedPool wh{sigma_spd, SpdMatrix::identity(pool.d()),
                  SpdMatrix::identity(pool.d()), Matrix(), Vector()};
  const Matrix& v = eig.eigenvectors;
  wh.sigma_inv = SpdMatrix::from_symmetric(
      v * eig.eigenvalues.cwiseInverse().asDiagonal() * v.transpose());
  wh.sigma_inv_sqrt = SpdMatrix::from_symmetric(
      v * eig.eigenvalues.array().rsqrt().matrix().asDiagonal() *
      v.transpose());
  wh.x_tilde = pool.features() * wh.sigma_inv_sqrt.entries();
  wh.tilde_norms_sq = wh.x_tilde.rowwise().squaredNorm();
  return wh;
}

namespace {

// Root of sum_i (lambda_i + nu)^{-2} = 1 on (-lambda_min, inf).  The
// residual is strictly decreasing there: +inf at the pole, and at
// nu = -lambda_min + sqrt(d) every term is at most 1/d, so the bracket
// upper end always has nonpositive residual.
double solve_nu_lhalf(const Vector& lambdas) {
  const Index d = lambdas.size();
  const double lmin = lambdas(0);
  auto residual = [&](double nu) {
    double acc = 0.0;
    for (Index i = 0; i < d; ++i) {
      const double t = lambdas(i) + nu;
      acc += 1.0 / (t * t);
    }
    return acc - 1.0;
  };
  const double offset = std::max(1e-14, 1e-14 * std::abs(lmin));
  double lo = -lmin + offset;
  double hi = -lmin + std::sqrt(static_cast<double>(d)) + 1.0;
  double rhi = residual(hi);
  int expansions = 0;
  while (rhi > 0.0) {
    if (++expansions > 200)
      throw NumericError(
          "ftrl_action: l1/2 bracket failed to capture the root after 200 "
          "expansions; bracket [" +
          std::to_string(lo) + ", " + std::to_string(hi) + "], residual " +
          std::to_string(rhi));
    hi = lo + 2.0 * (hi - lo);
    rhi = residual(hi);
  }
  double r = residual(lo);
  if (r < 0.0)
    throw NumericError("ftrl_action: l1/2 residual negative at the pole side "
                       "of the bracket");
  double nu = lo;
  for (int it = 0; it < 300; ++it) {
    nu = 0.5 * (lo + hi);
    r = residual(nu);
    if (std::abs(r) <= 1e-12) return nu;
    if (r > 0.0)
      lo = nu;
    else
      hi = nu;
  }
  if (std::abs(r) > 1e-12)
    throw NumericError(
        "ftrl_action: l1/2 bisection stalled, bracket [" + std::to_string(lo) +
        ", " + std::to_string(hi) + "], residual " + std::to_string(r));
  return nu;
}

FtrlAction action_from_eigenvalues(const EigenDecomposition& eig,
                                   const Vector& weights,
                                   const Vector& weights_sqrt, double nu) {
  const Matrix& v = eig.eigenvectors;
  FtrlAction act{
      SpdMatrix::from_symmetric(v * weights.asDiagonal() * v.transpose()),
      SpdMatrix::from_symmetric(v * weights_sqrt.asDiagonal() *
                                v.transpose()),
      nu};
  return act;
}

}  // namespace

FtrlAction ftrl_action(const SpdMatrix& loss_sum, Regularizer reg,
                       double alpha) {
  if (!(alpha > 0.0)) throw ArgumentError("ftrl_action: alpha must be > 0");
  const EigenDecomposition eig = sym_eigen(loss_sum);
  const Index d = eig.eigenvalues.size();
  Vector w(d), wsq(d);
  if (reg == Regularizer::Entropy) {
    const double shift = eig.min_eigenvalue();
    double z = 0.0;
    for (Index i = 0; i < d; ++i) z += std::exp(-(eig.eigenvalues(i) - shift));
    const double nu = -shift + std::log(z);
    for (Index i = 0; i < d; ++i) {
      w(i) = std::exp(-(eig.eigenvalues(i) - shift)) / z;
      wsq(i) = std::sqrt(w(i));
    }
    return action_from_eigenvalues(eig, w, wsq, nu);
  }
  const double nu = solve_nu_lhalf(eig.eigenvalues);
  for (Index i = 0; i < d; ++i) {
    const double t = eig.eigenvalues(i) + nu;
    w(i) = 1.0 / (t * t);
    wsq(i) = 1.0 / t;
  }
  return action_from_eigenvalues(eig, w, wsq, nu);
}

double selection_score(Regularizer reg, double alpha, const FtrlAction& action,
                       const Vector& x_tilde_i, double norm_sq_i) {
  if (norm_sq_i <= 0.0) return -std::numeric_limits<double>::infinity();
  const double q = x_tilde_i.dot(action.matrix.entries() * x_tilde_i);
  if (reg == Regularizer::Entropy)
    return (1.0 - std::exp(-alpha * norm_sq_i)) * q / norm_sq_i;
  const double qh = x_tilde_i.dot(action.sqrt_matrix.entries() * x_tilde_i);
  return q / (1.0 + alpha * qh);
}

namespace detail {

SelectionResult run_rounding(const DesignPool& pool,
                             const RelaxedSolution& relaxed,
                             const Criterion& c, Regularizer reg, double alpha,
                             long k, double lambda, bool with_replacement) {
  if (k < 1) throw ArgumentError("rounding: budget k must be >= 1");
  if (!(alpha > 0.0)) throw ArgumentError("rounding: alpha must be > 0");
  if (lambda < 0.0) throw ArgumentError("rounding: lambda must be >= 0");
  const Index n = pool.n();
  const Index d = pool.d();
  if (!with_replacement && k > n)
    throw ArgumentError("rounding: budget " + std::to_string(k) +
                        " exceeds pool size " + std::to_string(n) +
                        " without replacement");

  const WhitenedPool wh = whiten(pool, relaxed, lambda);
  const Matrix& xt = wh.x_tilde;
  const Vector& ns = wh.tilde_norms_sq;
  const bool ridge = lambda > 0.0;
  Matrix d_tilde;
  SpdMatrix d_tilde_spd = SpdMatrix::zero(d);
  if (ridge) {
    d_tilde = (lambda / static_cast<double>(k)) * wh.sigma_inv.entries();
    d_tilde_spd = SpdMatrix::from_symmetric(d_tilde);
  }

  SelectionResult res;
  res.alpha_used = alpha;
  res.ridge_lambda = lambda;
  res.regularizer = reg;
  res.selection.with_replacement = with_replacement;
  res.steps.reserve(static_cast<std::size_t>(k));

  SpdMatrix loss_sum = SpdMatrix::zero(d);
  std::vector<char> taken(static_cast<std::size_t>(n), 0);
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double inner_sum = 0.0;

  for (long t = 0; t < k; ++t) {
    const FtrlAction act = ftrl_action(loss_sum, reg, alpha);
    const Matrix* score_m = &act.matrix.entries();
    const Matrix* score_msq = &act.sqrt_matrix.entries();
    double tr_offset = 0.0;
    std::optional<RidgeShiftedAction> shifted;
    if (ridge) {
      shifted = ridge_b_matrix(act.matrix, d_tilde_spd, reg, alpha);
      score_m = &shifted->matrix.entries();
      score_msq = &shifted->sqrt_matrix.entries();
      tr_offset = reg == Regularizer::Entropy
                      ? act.matrix.trace() - shifted->matrix.trace()
                      : act.sqrt_matrix.trace() - shifted->sqrt_matrix.trace();
    }

    const Vector qb = ((xt * *score_m).cwiseProduct(xt)).rowwise().sum();
    Vector qbh;
    if (reg == Regularizer::LHalf)
      qbh = ((xt * *score_msq).cwiseProduct(xt)).rowwise().sum();

    double max_all = neg_inf;
    double best = neg_inf;
    Index chosen = -1;
    for (Index i = 0; i < n; ++i) {
      double s;
      if (ns(i) <= 0.0) {
        s = neg_inf;
      } else if (reg == Regularizer::Entropy) {
        s = (1.0 - std::exp(-alpha * ns(i))) * qb(i) / ns(i);
      } else {
        s = qb(i) / (1.0 + alpha * qbh(i));
      }
      if (s > max_all) max_all = s;
      if (!with_replacement && taken[static_cast<std::size_t>(i)]) continue;
      if (s > best) {
        best = s;
        chosen = i;
      }
    }
    if (chosen < 0 || best == neg_inf)
      throw NumericError(
          "rounding: no selectable candidate at step " + std::to_string(t) +
          " (every remaining point has zero whitened norm)");
    taken[static_cast<std::size_t>(chosen)] = 1;
    res.selection.indices.push_back(chosen);

    const Vector xi = xt.row(chosen).transpose();
    const double qa = xi.dot(act.matrix.entries() * xi);
    const double qah = xi.dot(act.sqrt_matrix.entries() * xi);
    StepRecord rec;
    rec.index = chosen;
    rec.score = best;
    rec.max_score_all = max_all;
    rec.loss_inner = qa;
    rec.loss_inner_sqrt = qah;
    if (ridge) {
      rec.loss_inner += act.matrix.entries().cwiseProduct(d_tilde).sum();
      rec.loss_inner_sqrt +=
          act.sqrt_matrix.entries().cwiseProduct(d_tilde).sum();
    }
    rec.norm_sq = ns(chosen);
    rec.nu = act.nu;
    rec.trace_offset = tr_offset;

    Matrix f_t = xi * xi.transpose();
    if (ridge) f_t += d_tilde;
    loss_sum = SpdMatrix::from_symmetric(loss_sum.entries() + alpha * f_t);

    const EigenDecomposition prefix_eig =
        sym_eigen(SpdMatrix::from_symmetric(loss_sum.entries() / alpha));
    rec.lambda_min_prefix = prefix_eig.min_eigenvalue();
    inner_sum += rec.loss_inner;
    rec.regret_prefix = inner_sum - rec.lambda_min_prefix;
    res.steps.push_back(rec);
  }

  // Fresh accumulation from the chosen indices for the certificate and the
  // reported objective.
  Matrix whitened_gram = Matrix::Zero(d, d);
  Matrix selected_cov = Matrix::Zero(d, d);
  for (Index idx : res.selection.indices) {
    const Vector xti = xt.row(idx).transpose();
    whitened_gram.noalias() += xti * xti.transpose();
    const Vector x = pool.features().row(idx).transpose();
    selected_cov.noalias() += x * x.transpose();
  }
  Matrix cert = whitened_gram;
  if (ridge) cert += lambda * wh.sigma_inv.entries();
  res.tau = sym_eigen(SpdMatrix::from_symmetric(cert)).min_eigenvalue();

  Matrix sigma_sel = selected_cov;
  if (ridge) sigma_sel += lambda * Matrix::Identity(d, d);
  try {
    res.objective_selected =
        criterion_value(c, SpdMatrix::from_symmetric(sigma_sel));
  } catch (const SingularMatrixError&) {
    // k < d (or a degenerate selection) leaves the covariance singular;
    // every criterion diverges there, which tau = 0 mirrors.
    res.objective_selected = std::numeric_limits<double>::infinity();
  }
  res.objective_relaxed = relaxed.objective_value;
  res.relative_objective = res.objective_selected / res.objective_relaxed;
  res.regret = res.steps.back().regret_prefix;
  if (reg == Regularizer::Entropy) {
    res.c1_diagnostic = c1_diagnostic(res, alpha);
  } else {
    res.c1_diagnostic = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

}  // namespace detail

SelectionResult run_regret_min(const DesignPool& pool,
                               const RelaxedSolution& relaxed,
                               const Criterion& c, Regularizer reg,
                               double alpha, long k, bool with_replacement) {
  return detail::run_rounding(pool, relaxed, c, reg, alpha, k, 0.0,
                              with_replacement);
}

BoundReport verify_lambda_min_bound(const SelectionResult& run,
                                    Regularizer reg, double alpha, Index d) {
  constexpr double kSlack = 1e-8;
  const double head = reg == Regularizer::Entropy
                          ? -std::log(static_cast<double>(d)) / alpha
                          : -2.0 * std::sqrt(static_cast<double>(d)) / alpha;
  BoundReport report;
  report.margins.reserve(run.steps.size());
  double acc = 0.0;
  int t = 0;
  for (const StepRecord& rec : run.steps) {
    acc += reg == Regularizer::Entropy
               ? (rec.trace_offset + rec.score) / alpha
               : rec.trace_offset / alpha + rec.score;
    const double margin = rec.lambda_min_prefix - (head + acc);
    report.margins.push_back(margin);
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.worst_step = t;
    }
    if (margin < -kSlack) report.passed = false;
    ++t;
  }
  return report;
}

Prescription prescribe_parameters(Index d, double epsilon,
                                  PrescriptionMode mode, double c1_estimate) {
  if (d < 2) throw ArgumentError("prescribe_parameters: d must be >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ArgumentError("prescribe_parameters: epsilon must lie in (0, 1)");
  const double dd = static_cast<double>(d);
  Prescription p;
  switch (mode) {
    case PrescriptionMode::EntropyA:
      p.alpha = 4.0 * std::log(dd) / epsilon;
      p.k_min = static_cast<long>(
          std::ceil(16.0 * dd * std::log(dd) / (epsilon * epsilon)));
      break;
    case PrescriptionMode::EntropyB:
      if (!(c1_estimate >= 2.0))
        throw ArgumentError(
            "prescribe_parameters: mode EntropyB needs a C1 estimate >= 2 "
            "(the formula floor)");
      p.alpha = 2.0 * std::log(dd) / epsilon;
      p.k_min = static_cast<long>(
          std::ceil(c1_estimate * dd * std::log(dd) / epsilon));
      break;
    case PrescriptionMode::LHalfC:
      p.alpha = 8.0 * std::sqrt(dd) / epsilon;
      p.k_min =
          static_cast<long>(std::ceil(32.0 * dd / (epsilon * epsilon)));
      break;
  }
  return p;
}

double c1_diagnostic(const SelectionResult& run, double alpha) {
  if (run.steps.empty())
    throw ArgumentError("c1_diagnostic: empty run trace");
  double min_norm_sq = std::numeric_limits<double>::infinity();
  for (const StepRecord& rec : run.steps)
    min_norm_sq = std::min(min_norm_sq, rec.norm_sq);
  return 2.0 / (1.0 - std::exp(-alpha * min_norm_sq));
}

}  // namespace oed

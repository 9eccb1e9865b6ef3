#include "oed/relax.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace oed {

void MirrorDescentConfig::validate() const {
  if (max_iters < 1) throw ArgumentError("mirror descent: max_iters >= 1");
  if (!(rel_tol > 0.0)) throw ArgumentError("mirror descent: rel_tol > 0");
  if (ridge_lambda < 0.0)
    throw ArgumentError("mirror descent: ridge_lambda >= 0");
  if (budget_k < 1) throw ArgumentError("mirror descent: budget_k >= 1");
  if (!(step_param > 0.0)) throw ArgumentError("mirror descent: step > 0");
}

Vector mirror_step(const Vector& omega, const Vector& grad, double gamma) {
  if (omega.size() != grad.size())
    throw ArgumentError("mirror_step: omega/gradient size mismatch");
  if (!grad.allFinite())
    throw ArgumentError("mirror_step: non-finite gradient");
  // max-subtraction keeps every exponent <= 0
  double shift = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < omega.size(); ++i)
    if (omega(i) > 0.0) shift = std::max(shift, -gamma * grad(i));
  if (!std::isfinite(shift))
    throw StateError("mirror_step: simplex iterate has no mass");
  Vector next(omega.size());
  for (Index i = 0; i < omega.size(); ++i)
    next(i) = omega(i) > 0.0
                  ? omega(i) * std::exp(-gamma * grad(i) - shift)
                  : 0.0;
  const double z = next.sum();
  if (!(z > 0.0)) throw StateError("mirror_step: zero normalizer");
  return next / z;
}

RelaxedSolution solve_relaxed(const DesignPool& pool, const Criterion& c,
                              const MirrorDescentConfig& cfg) {
  cfg.validate();
  const Index n = pool.n();
  const double k = static_cast<double>(cfg.budget_k);

  auto evaluate = [&](const Vector& omega) {
    try {
      CriterionEval ev = criterion_value_and_gradient(
          c, pool, (k * omega).eval(), cfg.ridge_lambda);
      ev.gradient *= k;  // d/d omega = k * d/d pi
      return ev;
    } catch (const SingularMatrixError& e) {
      throw SingularMatrixError(std::string(e.what()) +
                                "; consider ridge mode (ridge_lambda > 0)");
    }
  };

  Vector omega = Vector::Constant(n, 1.0 / static_cast<double>(n));
  CriterionEval state = evaluate(omega);

  RelaxedSolution sol;
  sol.trace.reserve(64);
  sol.trace.push_back(state.value);

  double g_inf = 0.0;
  double attenuation = 1.0;  // persistent backtracking scale
  const double log_n = std::log(static_cast<double>(n));

  for (int t = 1; t <= cfg.max_iters; ++t) {
    const double grad_inf = state.gradient.cwiseAbs().maxCoeff();
    g_inf = std::max(g_inf, grad_inf);
    if (g_inf == 0.0) {
      sol.converged = true;  // flat objective
      break;
    }
    double gamma =
        cfg.step_rule == StepRule::Fixed
            ? cfg.step_param
            : cfg.step_param * std::sqrt(log_n) /
                  (g_inf * std::sqrt(static_cast<double>(t)));
    gamma *= attenuation;

    // Backtrack until the objective does not increase.
    bool accepted = false;
    Vector candidate;
    CriterionEval cand_state{};
    for (int half = 0; half < 60; ++half) {
      candidate = mirror_step(omega, state.gradient, gamma);
      cand_state = evaluate(candidate);
      if (cand_state.value <=
          state.value + 1e-12 * std::max(1.0, std::abs(state.value))) {
        accepted = true;
        break;
      }
      gamma *= 0.5;
      attenuation *= 0.5;
    }
    if (!accepted) {
      sol.converged = true;  // no descent possible at vanishing step
      break;
    }
    attenuation = std::min(1.0, attenuation * 1.1892);  // 2^{1/4} recovery

    const double rel_change =
        std::abs(state.value - cand_state.value) /
        std::max(std::abs(cand_state.value), 1e-300);
    omega = candidate;
    state = cand_state;
    sol.trace.push_back(state.value);
    sol.iterations = t;
    if (rel_change < cfg.rel_tol) {
      sol.converged = true;
      break;
    }
  }

  sol.omega = omega;
  sol.pi = k * omega;
  sol.objective_value = state.value;
  return sol;
}

}  // namespace oed

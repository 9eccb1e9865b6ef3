#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "oed/rng.hpp"
#include "oed/sym_eigen.hpp"
#include "oed/types.hpp"

namespace oed {

enum class CriterionKind { A, D, E, V, G };

CriterionKind parse_criterion(std::string_view name);
std::string criterion_name(CriterionKind kind);

// One of the five design objectives.  V and G score a covariance matrix
// against the full pool, so they carry a pool reference; A, D, E do not.
class Criterion {
 public:
  explicit Criterion(CriterionKind kind);
  Criterion(CriterionKind kind, const DesignPool& pool);

  CriterionKind kind() const { return kind_; }
  const DesignPool* pool() const { return pool_; }
  // X^T X of the referenced pool (V and G only).
  const Matrix& pool_gram() const;

 private:
  CriterionKind kind_;
  const DesignPool* pool_ = nullptr;
  Matrix pool_gram_;
};

// Shared relative threshold: sigma counts as singular when
// lambda_min <= 1e-12 * lambda_max.
inline constexpr double kSingularityRatio = 1e-12;

double criterion_value(const Criterion& c, const SpdMatrix& sigma);

// Component i is the partial derivative (subgradient component for E and
// G) of f(sum_j w_j x_j x_j^T + ridge * I) with respect to w_i.
Vector criterion_weight_gradient(const Criterion& c, const DesignPool& pool,
                                 const Vector& weights, double ridge);

// Value and gradient from one decomposition of sigma(w).
struct CriterionEval {
  double value;
  Vector gradient;
};
CriterionEval criterion_value_and_gradient(const Criterion& c,
                                           const DesignPool& pool,
                                           const Vector& weights,
                                           double ridge);

// One sampled triple for the criterion property check.  b = a + (PSD), so
// a <= b in the Loewner order by construction.
struct AssumptionSample {
  SpdMatrix a;
  SpdMatrix b;
  double t;  // in (0, 1)
};

std::vector<AssumptionSample> make_assumption_samples(Index dim, int count,
                                                      RngSeed seed);

struct AssumptionViolation {
  std::string property;
  int sample_index;
  double lhs;
  double rhs;
};

struct AssumptionReport {
  int samples_checked = 0;
  std::vector<AssumptionViolation> violations;
  bool passed() const { return violations.empty(); }
};

// Checks convexity, monotonicity, and reciprocal sub-linearity of the
// criterion on the sampled triples (tolerance 1e-9 each).
AssumptionReport check_assumption_f(const Criterion& c,
                                    const std::vector<AssumptionSample>& samples);

}  // namespace oed

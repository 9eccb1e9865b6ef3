#include "oed/criteria.hpp"

#include <cctype>
#include <cmath>

namespace oed {

CriterionKind parse_criterion(std::string_view name) {
  if (name.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(name[0]))) {
      case 'A':
        return CriterionKind::A;
      case 'D':
        return CriterionKind::D;
      case 'E':
        return CriterionKind::E;
      case 'V':
        return CriterionKind::V;
      case 'G':
        return CriterionKind::G;
      default:
        break;
    }
  }
  throw ArgumentError("unknown criterion '" + std::string(name) +
                      "' (expected one of A|D|E|V|G)");
}

std::string criterion_name(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::A:
      return "A";
    case CriterionKind::D:
      return "D";
    case CriterionKind::E:
      return "E";
    case CriterionKind::V:
      return "V";
    case CriterionKind::G:
      return "G";
  }
  return "?";
}

Criterion::Criterion(CriterionKind kind) : kind_(kind) {
  if (kind == CriterionKind::V || kind == CriterionKind::G)
    throw ArgumentError("criterion " + criterion_name(kind) +
                        " requires a pool reference");
}

Criterion::Criterion(CriterionKind kind, const DesignPool& pool)
    : kind_(kind), pool_(&pool) {
  if (kind == CriterionKind::V || kind == CriterionKind::G)
    pool_gram_ = pool.features().transpose() * pool.features();
}

const Matrix& Criterion::pool_gram() const {
  if (pool_gram_.size() == 0)
    throw StateError("criterion " + criterion_name(kind_) +
                     " has no pool Gram matrix");
  return pool_gram_;
}

namespace {

void check_not_singular(const EigenDecomposition& eig) {
  const double lo = eig.min_eigenvalue();
  const double hi = eig.max_eigenvalue();
  if (!(lo > kSingularityRatio * hi) || hi <= 0.0)
    throw SingularMatrixError(
        "covariance matrix is singular (lambda_min " + std::to_string(lo) +
        ", lambda_max " + std::to_string(hi) + ")");
}

double value_from_eig(const Criterion& c, const EigenDecomposition& eig) {
  const Index d = eig.eigenvalues.size();
  switch (c.kind()) {
    case CriterionKind::A:
      return eig.eigenvalues.cwiseInverse().sum() / static_cast<double>(d);
    case CriterionKind::D:
      return -eig.eigenvalues.array().log().sum() / static_cast<double>(d);
    case CriterionKind::E:
      return 1.0 / eig.min_eigenvalue();
    case CriterionKind::V: {
      // <Sigma^{-1}, X^T X> = sum_j v_j^T (X^T X) v_j / lambda_j
      const Matrix& gram = c.pool_gram();
      double acc = 0.0;
      for (Index j = 0; j < d; ++j) {
        const Vector v = eig.eigenvectors.col(j);
        acc += v.dot(gram * v) / eig.eigenvalues(j);
      }
      return acc / static_cast<double>(c.pool()->n());
    }
    case CriterionKind::G: {
      const Matrix b = c.pool()->features() * eig.eigenvectors;
      const Vector leverage =
          (b.array().square().rowwise() *
           eig.eigenvalues.array().cwiseInverse().transpose())
              .rowwise()
              .sum();
      return leverage.maxCoeff();
    }
  }
  throw StateError("unreachable criterion kind");
}

}  // namespace

double criterion_value(const Criterion& c, const SpdMatrix& sigma) {
  const EigenDecomposition eig = sym_eigen(sigma);
  check_not_singular(eig);
  return value_from_eig(c, eig);
}

CriterionEval criterion_value_and_gradient(const Criterion& c,
                                           const DesignPool& pool,
                                           const Vector& weights,
                                           double ridge) {
  if (ridge < 0.0) throw ArgumentError("ridge must be nonnegative");
  SpdMatrix sigma = covariance(pool, weights);
  if (ridge > 0.0) {
    sigma = SpdMatrix::from_symmetric(
        sigma.entries() + ridge * Matrix::Identity(pool.d(), pool.d()));
  }
  const EigenDecomposition eig = sym_eigen(sigma);
  check_not_singular(eig);

  CriterionEval out;
  out.value = value_from_eig(c, eig);

  const Matrix& x = pool.features();
  const Index d = pool.d();
  const Matrix b = x * eig.eigenvectors;  // b(i,j) = x_i . v_j
  switch (c.kind()) {
    case CriterionKind::A:
      out.gradient = -(b.array().square().rowwise() *
                       eig.eigenvalues.array().square().cwiseInverse()
                           .transpose())
                          .rowwise()
                          .sum() /
                     static_cast<double>(d);
      break;
    case CriterionKind::D:
      out.gradient = -(b.array().square().rowwise() *
                       eig.eigenvalues.array().cwiseInverse().transpose())
                          .rowwise()
                          .sum() /
                     static_cast<double>(d);
      break;
    case CriterionKind::E: {
      // Subgradient via an eigenvector of lambda_min; ascending order puts
      // the lowest-index choice at column 0 when the eigenvalue repeats.
      const Vector v = eig.eigenvectors.col(0);
      const double lmin = eig.min_eigenvalue();
      out.gradient = -(x * v).array().square() / (lmin * lmin);
      break;
    }
    case CriterionKind::V: {
      const Matrix sigma_inv = eig.eigenvectors *
                               eig.eigenvalues.cwiseInverse().asDiagonal() *
                               eig.eigenvectors.transpose();
      const Matrix p = sigma_inv * c.pool_gram() * sigma_inv;
      out.gradient = -((x * p).cwiseProduct(x)).rowwise().sum() /
                     static_cast<double>(c.pool()->n());
      break;
    }
    case CriterionKind::G: {
      const Matrix bp = c.pool()->features() * eig.eigenvectors;
      const Vector leverage =
          (bp.array().square().rowwise() *
           eig.eigenvalues.array().cwiseInverse().transpose())
              .rowwise()
              .sum();
      Index jstar = 0;
      for (Index i = 1; i < leverage.size(); ++i)
        if (leverage(i) > leverage(jstar)) jstar = i;
      const Matrix sigma_inv = eig.eigenvectors *
                               eig.eigenvalues.cwiseInverse().asDiagonal() *
                               eig.eigenvectors.transpose();
      const Vector u = sigma_inv * c.pool()->point(jstar);
      out.gradient = -(x * u).array().square();
      break;
    }
  }
  return out;
}

Vector criterion_weight_gradient(const Criterion& c, const DesignPool& pool,
                                 const Vector& weights, double ridge) {
  return criterion_value_and_gradient(c, pool, weights, ridge).gradient;
}

std::vector<AssumptionSample> make_assumption_samples(Index dim, int count,
                                                      RngSeed seed) {
  CounterRng rng(seed);
  std::vector<AssumptionSample> samples;
  samples.reserve(static_cast<std::size_t>(count));
  auto random_pd = [&](double diag_boost) {
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) g(i, j) = rng.next_gaussian();
    Matrix m = g * g.transpose() / static_cast<double>(dim) +
               diag_boost * Matrix::Identity(dim, dim);
    return SpdMatrix::from_symmetric(m);
  };
  for (int s = 0; s < count; ++s) {
    AssumptionSample smp{random_pd(0.05), SpdMatrix::identity(dim), 0.5};
    // b = a + PSD, so a <= b holds by construction.
    SpdMatrix bump = random_pd(0.0);
    smp.b = SpdMatrix::from_symmetric(smp.a.entries() + bump.entries());
    smp.t = 0.05 + 0.9 * rng.next_double();
    samples.push_back(std::move(smp));
  }
  return samples;
}

AssumptionReport check_assumption_f(
    const Criterion& c, const std::vector<AssumptionSample>& samples) {
  constexpr double kTol = 1e-9;
  AssumptionReport report;
  int idx = 0;
  for (const auto& s : samples) {
    const double fa = criterion_value(c, s.a);
    const double fb = criterion_value(c, s.b);
    const double t = s.t;

    const SpdMatrix mix = SpdMatrix::from_symmetric(
        t * s.a.entries() + (1.0 - t) * s.b.entries());
    const double fmix = criterion_value(c, mix);
    if (fmix > t * fa + (1.0 - t) * fb + kTol)
      report.violations.push_back(
          {"convexity", idx, fmix, t * fa + (1.0 - t) * fb});

    if (fa < fb - kTol)  // a <= b must give f(a) >= f(b)
      report.violations.push_back({"monotonicity", idx, fa, fb});

    const SpdMatrix ta = SpdMatrix::from_symmetric(t * s.a.entries());
    const double fta = criterion_value(c, ta);
    if (fta > fa / t + kTol)
      report.violations.push_back({"reciprocal sub-linearity", idx, fta,
                                   fa / t});
    ++idx;
  }
  report.samples_checked = idx;
  return report;
}

}  // namespace oed

#include "oed/sym_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace oed {

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form with
// accumulation of the orthogonal transform in z (classic tred2).
void tridiagonalize(Matrix& z, Vector& d, Vector& e) {
  const Index n = z.rows();
  for (Index i = n - 1; i >= 1; --i) {
    const Index l = i - 1;
    double h = 0.0;
    double scale = 0.0;
    if (l > 0) {
      for (Index k = 0; k <= l; ++k) scale += std::abs(z(i, k));
      if (scale == 0.0) {
        e(i) = z(i, l);
      } else {
        for (Index k = 0; k <= l; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e(i) = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (Index j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (Index k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
          for (Index k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
          e(j) = g / h;
          f += e(j) * z(i, j);
        }
        const double hh = f / (h + h);
        for (Index j = 0; j <= l; ++j) {
          f = z(i, j);
          e(j) = g = e(j) - hh * f;
          for (Index k = 0; k <= j; ++k) z(j, k) -= f * e(k) + g * z(i, k);
        }
      }
    } else {
      e(i) = z(i, l);
    }
    d(i) = h;
  }
  d(0) = 0.0;
  e(0) = 0.0;
  for (Index i = 0; i < n; ++i) {
    if (d(i) != 0.0) {
      for (Index j = 0; j < i; ++j) {
        double g = 0.0;
        for (Index k = 0; k < i; ++k) g += z(i, k) * z(k, j);
        for (Index k = 0; k < i; ++k) z(k, j) -= g * z(k, i);
      }
    }
    d(i) = z(i, i);
    z(i, i) = 1.0;
    for (Index j = 0; j < i; ++j) z(j, i) = z(i, j) = 0.0;
  }
}

constexpr int kQlIterationCap = 50;  // per eigenvalue

// Implicit-shift QL on the tridiagonal (d, e), rotating z's columns along.
void ql_implicit(Vector& d, Vector& e, Matrix& z) {
  const Index n = d.size();
  const double eps = std::numeric_limits<double>::epsilon();
  for (Index i = 1; i < n; ++i) e(i - 1) = e(i);
  e(n - 1) = 0.0;
  for (Index l = 0; l < n; ++l) {
    int iter = 0;
    Index m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d(m)) + std::abs(d(m + 1));
        if (std::abs(e(m)) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kQlIterationCap)
          throw NumericError(
              "sym_eigen: QL failed to converge within " +
              std::to_string(kQlIterationCap) +
              " iterations; off-diagonal residual " + std::to_string(e(l)));
        double g = (d(l + 1) - d(l)) / (2.0 * e(l));
        double r = std::hypot(g, 1.0);
        g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        Index i = m - 1;
        for (; i >= l; --i) {
          double f = s * e(i);
          const double b = c * e(i);
          r = std::hypot(f, g);
          e(i + 1) = r;
          if (r == 0.0) {
            d(i + 1) -= p;
            e(m) = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d(i + 1) - p;
          r = (d(i) - g) * s + 2.0 * c * b;
          p = s * r;
          d(i + 1) = g + p;
          g = c * r - b;
          for (Index k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d(l) -= p;
        e(l) = g;
        e(m) = 0.0;
      }
    } while (m != l);
  }
}

void normalize_column_signs(Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index arg = 0;
    double best = 0.0;
    for (Index i = 0; i < v.rows(); ++i) {
      const double a = std::abs(v(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
  }
}

}  // namespace

EigenDecomposition sym_eigen(const SpdMatrix& m) {
  const Index n = m.dim();
  Matrix z = m.entries();
  Vector d(n), e(n);
  tridiagonalize(z, d, e);
  ql_implicit(d, e, z);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return d(a) < d(b); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    out.eigenvalues(j) = d(order[static_cast<std::size_t>(j)]);
    out.eigenvectors.col(j) = z.col(order[static_cast<std::size_t>(j)]);
  }
  normalize_column_signs(out.eigenvectors);
  return out;
}

SpdMatrix spd_function(const SpdMatrix& m,
                       const std::function<double(double)>& scalar_map,
                       MapDomain domain, const char* map_name) {
  const EigenDecomposition eig = sym_eigen(m);
  Vector mapped(eig.eigenvalues.size());
  for (Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    if (domain == MapDomain::PositiveOnly && lambda <= 0.0)
      throw DomainError(std::string(map_name) +
                        " undefined for eigenvalue " + std::to_string(lambda) +
                        " at position " + std::to_string(i));
    mapped(i) = scalar_map(lambda);
    if (!std::isfinite(mapped(i)))
      throw DomainError(std::string(map_name) + " produced non-finite value " +
                        std::to_string(mapped(i)) + " at eigenvalue " +
                        std::to_string(lambda));
  }
  const Matrix r = eig.eigenvectors * mapped.asDiagonal() *
                   eig.eigenvectors.transpose();
  return SpdMatrix::from_symmetric(r);
}

SpdMatrix spd_exp(const SpdMatrix& m) {
  return spd_function(m, [](double x) { return std::exp(x); },
                      MapDomain::AnyReal, "matrix exp");
}

SpdMatrix spd_log(const SpdMatrix& m) {
  return spd_function(m, [](double x) { return std::log(x); },
                      MapDomain::PositiveOnly, "matrix log");
}

SpdMatrix spd_sqrt(const SpdMatrix& m) {
  return spd_function(m, [](double x) { return std::sqrt(x); },
                      MapDomain::PositiveOnly, "matrix sqrt");
}

SpdMatrix spd_inv(const SpdMatrix& m) {
  return spd_function(m, [](double x) { return 1.0 / x; },
                      MapDomain::PositiveOnly, "matrix inverse");
}

SpdMatrix spd_inv_sqrt(const SpdMatrix& m) {
  return spd_function(m, [](double x) { return 1.0 / std::sqrt(x); },
                      MapDomain::PositiveOnly, "matrix inverse sqrt");
}

SpdMatrix covariance(const DesignPool& pool, const Vector& weights) {
  if (weights.size() != pool.n())
    throw ArgumentError("covariance: " + std::to_string(weights.size()) +
                        " weights for " + std::to_string(pool.n()) +
                        " points");
  if (!weights.allFinite() || weights.minCoeff() < 0.0)
    throw ArgumentError("covariance: weights must be finite and nonnegative");
  const Matrix& x = pool.features();
  const Matrix g = x.transpose() * weights.asDiagonal() * x;
  return SpdMatrix::from_symmetric(g);
}

SpdMatrix SpdMatrix::positive_semidefinite(const Matrix& m) {
  SpdMatrix s = from_symmetric(m);
  const EigenDecomposition eig = sym_eigen(s);
  const double norm = std::max(std::abs(eig.min_eigenvalue()),
                               std::abs(eig.max_eigenvalue()));
  if (eig.min_eigenvalue() < -1e-10 * norm)
    throw ArgumentError("SpdMatrix: eigenvalue " +
                        std::to_string(eig.min_eigenvalue()) +
                        " below the PSD tolerance");
  return s;
}

SpdMatrix SpdMatrix::positive_definite(const Matrix& m) {
  SpdMatrix s = from_symmetric(m);
  const EigenDecomposition eig = sym_eigen(s);
  const double norm = std::max(std::abs(eig.min_eigenvalue()),
                               std::abs(eig.max_eigenvalue()));
  if (eig.min_eigenvalue() <= 1e-12 * norm)
    throw ArgumentError("SpdMatrix: eigenvalue " +
                        std::to_string(eig.min_eigenvalue()) +
                        " is not positive");
  return s;
}

}  // namespace oed

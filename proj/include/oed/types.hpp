#pragma once

#include <Eigen/Dense>
#include <vector>

#include "oed/errors.hpp"

namespace oed {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// The pool of n candidate points, one per row.
class DesignPool {
 public:
  explicit DesignPool(Matrix features);

  const Matrix& features() const { return features_; }
  Index n() const { return features_.rows(); }
  Index d() const { return features_.cols(); }
  Vector point(Index i) const { return features_.row(i).transpose(); }

 private:
  Matrix features_;
};

// Dense symmetric matrix, stored exactly symmetric.  Definiteness is the
// caller's contract; operations that need PD check it when they decompose.
class SpdMatrix {
 public:
  // Verifies relative asymmetry <= 1e-10, then stores (M + M^T)/2.
  static SpdMatrix from_symmetric(const Matrix& m);
  // Also verifies eigenvalues >= -1e-10 * lambda_max_abs.
  static SpdMatrix positive_semidefinite(const Matrix& m);
  // Also verifies all eigenvalues > 0.
  static SpdMatrix positive_definite(const Matrix& m);
  static SpdMatrix identity(Index d);
  static SpdMatrix zero(Index d);

  const Matrix& entries() const { return entries_; }
  Index dim() const { return entries_.rows(); }
  double trace() const { return entries_.trace(); }

 private:
  explicit SpdMatrix(Matrix m) : entries_(std::move(m)) {}
  Matrix entries_;
};

struct EigenDecomposition {
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // orthonormal columns, V.col(j) <-> eigenvalues[j]

  double min_eigenvalue() const { return eigenvalues(0); }
  double max_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
  Matrix reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() *
           eigenvectors.transpose();
  }
};

// An ordered multiset of pool indices.
struct Selection {
  std::vector<Index> indices;
  bool with_replacement = false;

  Index size() const { return static_cast<Index>(indices.size()); }
  // Checks every index in [0, n) and distinctness when applicable.
  void validate(Index n) const;
};

}  // namespace oed

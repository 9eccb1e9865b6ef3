#include "oed/types.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

namespace oed {

DesignPool::DesignPool(Matrix features) : features_(std::move(features)) {
  if (features_.rows() < 1 || features_.cols() < 1)
    throw ArgumentError("DesignPool: need at least one row and one column");
  if (!features_.allFinite())
    throw ArgumentError("DesignPool: non-finite feature entry");
}

SpdMatrix SpdMatrix::from_symmetric(const Matrix& m) {
  if (m.rows() != m.cols())
    throw ArgumentError("SpdMatrix: matrix is not square");
  if (!m.allFinite()) throw ArgumentError("SpdMatrix: non-finite entry");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0 && asym > 1e-10 * scale)
    throw ArgumentError("SpdMatrix: relative asymmetry " +
                        std::to_string(asym / scale) + " exceeds 1e-10");
  return SpdMatrix(((m + m.transpose()) * 0.5).eval());
}

SpdMatrix SpdMatrix::identity(Index d) {
  return SpdMatrix(Matrix::Identity(d, d));
}

SpdMatrix SpdMatrix::zero(Index d) { return SpdMatrix(Matrix::Zero(d, d)); }

void Selection::validate(Index n) const {
  std::unordered_set<Index> seen;
  for (Index idx : indices) {
    if (idx < 0 || idx >= n)
      throw ArgumentError("Selection: index " + std::to_string(idx) +
                          " outside [0, " + std::to_string(n) + ")");
    if (!with_replacement && !seen.insert(idx).second)
      throw ArgumentError("Selection: duplicate index " + std::to_string(idx) +
                          " in a without-replacement selection");
  }
}

}  // namespace oed

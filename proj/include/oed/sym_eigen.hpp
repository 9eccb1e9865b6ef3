#pragma once

#include <functional>

#include "oed/types.hpp"

namespace oed {

// Symmetric eigendecomposition by Householder tridiagonalization followed
// by implicit-shift QL.  Fully deterministic: fixed reduction order,
// eigenvalues sorted ascending, eigenvector signs normalized so the entry
// of largest magnitude is positive.
EigenDecomposition sym_eigen(const SpdMatrix& m);

enum class MapDomain {
  AnyReal,       // map defined everywhere (exp, polynomials)
  PositiveOnly,  // map needs lambda > 0 (log, x^{-1/2}, x^{-1})
};

// V f(Lambda) V^T for a scalar map f applied to the eigenvalues.
SpdMatrix spd_function(const SpdMatrix& m,
                       const std::function<double(double)>& scalar_map,
                       MapDomain domain, const char* map_name = "scalar map");

SpdMatrix spd_exp(const SpdMatrix& m);
SpdMatrix spd_log(const SpdMatrix& m);
SpdMatrix spd_sqrt(const SpdMatrix& m);
SpdMatrix spd_inv(const SpdMatrix& m);
SpdMatrix spd_inv_sqrt(const SpdMatrix& m);

// sum_i w_i x_i x_i^T over pool rows, symmetrized after accumulation.
SpdMatrix covariance(const DesignPool& pool, const Vector& weights);

}  // namespace oed

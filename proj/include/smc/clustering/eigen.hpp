#pragma once

#include <cstddef>
#include <vector>

#include "smc/core/matrix.hpp"

namespace smc {

struct EigenDecomposition {
  std::vector<double> values;  // descending
  Matrix vectors;              // column j pairs with values[j]
  std::size_t sweeps = 0;
};

// Cyclic Jacobi for dense symmetric matrices. Rotations continue until every
// off-diagonal entry is below 1e-10 * ||A||_F; more than 50 sweeps raise
// NumericalError. Each eigenvector is signed so its first significant
// component is positive.
EigenDecomposition symmetric_eigen(const Matrix& a);

double frobenius_norm(const Matrix& a);

}  // namespace smc

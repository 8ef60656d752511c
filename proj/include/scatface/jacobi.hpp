#pragma once

#include <vector>

#include "scatface/linalg.hpp"

namespace scatface {

struct EigenDecomposition {
    std::vector<double> values;  // non-increasing
    Matrix vectors;              // column k pairs with values[k]
};

/// Cyclic Jacobi rotations on a symmetric matrix.  Stops when the
/// off-diagonal Frobenius norm drops below 1e-12 of the matrix norm
/// (at most 100 sweeps).
EigenDecomposition jacobi_eigen(const Matrix& A);

}  // namespace scatface

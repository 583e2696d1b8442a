// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "neimkit/dense_matrix.hpp"

namespace neimkit {

/// Thin singular value decomposition m = u * diag(sigma) * vt with
/// column-orthonormal u (rows(m) x k), nonincreasing sigma (k), and
/// row-orthonormal vt (k x cols(m)), k = min(rows, cols).
struct SvdResult {
    DenseMatrix u;
    Vector sigma;
    DenseMatrix vt;
};

/// One-sided Jacobi SVD. Deterministic; throws ConvergenceError if the
/// sweep limit is exceeded (does not happen for the matrix sizes used here).
SvdResult svd(const DenseMatrix& m);

/// Solve a x = b by LU with partial pivoting. Throws SingularMatrixError
/// when a pivot falls below 1e-14 * ||a||_inf.
Vector solve_linear(const DenseMatrix& a, std::span<const double> b);

/// Minimum-norm least-squares solution of a x ~ b using the singular values
/// larger than cutoff * sigma_max. Rank deficiency is handled by the cutoff,
/// never an error.
Vector lstsq_svd(const DenseMatrix& a, std::span<const double> b, double cutoff = 1e-12);

/// Thomas algorithm for a tridiagonal system. diag has n entries, lower and
/// upper have n-1 (lower[i] multiplies x[i] in row i+1, upper[i] multiplies
/// x[i+1] in row i). Throws SingularMatrixError on a vanishing pivot.
Vector solve_tridiagonal(std::span<const double> diag, std::span<const double> lower,
                         std::span<const double> upper, std::span<const double> b);

}  // namespace neimkit

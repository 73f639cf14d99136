#pragma once

#include "ginv/types.hpp"

namespace ginv {

/// Number of singular values above rank_rel_tol * sigma_max. Zero matrix has rank 0.
Index numerical_rank(const Matrix& A, const Tolerances& tol = {});

/// Moore-Penrose pseudoinverse via SVD with relative cutoff.
Matrix pseudoinverse(const Matrix& A, const Tolerances& tol = {});

/// Solve A X = B for square nonsingular A. Throws SingularMatrix.
Matrix solve(const Matrix& A, const Matrix& B);

/// Determinant via partial-pivoting LU (0 when a pivot collapses).
double determinant(const Matrix& A);

/// Inverse via partial-pivoting LU. Throws SingularMatrix.
Matrix inverse(const Matrix& A);

/// Entrywise vector norms of a matrix (not operator norms).
double one_norm(const Matrix& H);
double max_norm(const Matrix& H);

/// Count of entries with |h_ij| > tol.
Index nnz(const Matrix& H, double tol = 1e-6);

/// Gather submatrices by index sets.
Matrix submatrix(const Matrix& A, const IndexSet& rows, const IndexSet& cols);
Matrix rows_of(const Matrix& A, const IndexSet& rows);
Matrix cols_of(const Matrix& A, const IndexSet& cols);

bool is_symmetric(const Matrix& A, double tol);

/// Throws InvalidParams if any entry is NaN or infinite.
void require_finite(const Matrix& A, const char* what);

}  // namespace ginv

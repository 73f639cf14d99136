#pragma once

#include "ginv/types.hpp"

#include <vector>

namespace ginv {

enum class GinvKind { Symmetric, AhSymmetric, HaSymmetric, General };

const char* to_string(GinvKind kind);

/// A reflexive generalized inverse together with the block that produced it.
/// H is n x m for an m x n input. Entries outside the declared block are
/// exactly zero, so nnz <= r^2 (symmetric/general), <= m*r (ah), <= n*r (ha).
struct GinvResult {
    Matrix H;
    GinvKind kind = GinvKind::General;
    IndexSet S;  // rows used (principal indices for the symmetric kind)
    IndexSet T;  // columns used
    double one_norm = 0.0;
    Index nnz = 0;
    std::vector<SwapRecord> trace;  // filled by the local-search pipelines
    bool sweep_limit_hit = false;
};

/// Symmetric block construction: H is zero except H[S,S] = A[S]^{-1}.
/// Requires A symmetric, |S| = rank(A), A[S] nonsingular.
/// The result satisfies P1, P2 and is exactly symmetric.
GinvResult symmetric_block(const Matrix& A, const IndexSet& S, const Tolerances& tol = {});

/// Column block construction: rows T of H hold A[:,T]^+, all other rows zero.
/// Requires |T| = rank(A) and A[:,T] of full column rank.
/// The result satisfies P1, P2, P3.
GinvResult column_block(const Matrix& A, const IndexSet& T, const Tolerances& tol = {});

/// Row block construction: column_block of A^T, transposed.
/// The result satisfies P1, P2, P4.
GinvResult row_block(const Matrix& A, const IndexSet& S, const Tolerances& tol = {});

/// Two-sided block construction: H is zero except H[T,S] = A[S,T]^{-1}.
/// The result satisfies P1, P2.
GinvResult general_block(const Matrix& A, const IndexSet& S, const IndexSet& T,
                         const Tolerances& tol = {});

/// Rank-1 specialization: column block over the nonzero column minimizing
/// ||a^+||_1 = ||a||_1 / ||a||_2^2, ties broken by lowest index.
GinvResult rank1_column(const Matrix& A, const Tolerances& tol = {});

}  // namespace ginv

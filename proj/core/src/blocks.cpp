#include "ginv/blocks.hpp"

#include "ginv/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace ginv {

const char* to_string(GinvKind kind) {
    switch (kind) {
        case GinvKind::Symmetric: return "symmetric";
        case GinvKind::AhSymmetric: return "ah";
        case GinvKind::HaSymmetric: return "ha";
        case GinvKind::General: return "general";
    }
    return "?";
}

namespace {

GinvResult finish(Matrix H, GinvKind kind, IndexSet S, IndexSet T, const Tolerances& tol) {
    GinvResult res;
    res.one_norm = one_norm(H);
    res.nnz = nnz(H, tol.nnz_tol);
    res.H = std::move(H);
    res.kind = kind;
    res.S = std::move(S);
    res.T = std::move(T);
    return res;
}

void check_cardinality(Index got, Index r, const char* what) {
    if (got != r)
        throw WrongCardinality(std::string(what) + ": index set has " + std::to_string(got) +
                               " elements but rank(A) = " + std::to_string(r));
}

}  // namespace

GinvResult symmetric_block(const Matrix& A, const IndexSet& S, const Tolerances& tol) {
    if (!is_symmetric(A, tol.residual_tol * (1.0 + max_norm(A))))
        throw NotSymmetric("symmetric_block: input is not symmetric");
    const Index r = numerical_rank(A, tol);
    check_cardinality(S.size(), r, "symmetric_block");

    Matrix block = submatrix(A, S, S);
    Matrix inv;
    try {
        inv = inverse(block);
    } catch (const SingularMatrix&) {
        throw SingularBlock("symmetric_block: A[S] is singular for S = " + S.to_string());
    }
    inv = ((inv + inv.transpose()) / 2.0).eval();  // exact symmetry

    Matrix H = Matrix::Zero(A.cols(), A.rows());
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j) H(S[i], S[j]) = inv(i, j);
    return finish(std::move(H), GinvKind::Symmetric, S, S, tol);
}

GinvResult column_block(const Matrix& A, const IndexSet& T, const Tolerances& tol) {
    const Index r = numerical_rank(A, tol);
    check_cardinality(T.size(), r, "column_block");

    Matrix Ahat = cols_of(A, T);
    // Ahat^+ = (Ahat^T Ahat)^{-1} Ahat^T, computed through a column-pivoted QR
    Eigen::ColPivHouseholderQR<Matrix> qr(Ahat);
    qr.setThreshold(tol.rank_rel_tol);
    if (qr.rank() < r)
        throw RankDeficientBlock("column_block: A[:,T] is rank deficient for T = " +
                                 T.to_string());
    Matrix Hhat = qr.solve(Matrix::Identity(A.rows(), A.rows()));

    Matrix H = Matrix::Zero(A.cols(), A.rows());
    for (Index i = 0; i < r; ++i) H.row(T[i]) = Hhat.row(i);
    GinvResult res = finish(std::move(H), GinvKind::AhSymmetric, IndexSet{}, T, tol);
    return res;
}

GinvResult row_block(const Matrix& A, const IndexSet& S, const Tolerances& tol) {
    GinvResult ah = column_block(A.transpose(), S, tol);
    Matrix H = ah.H.transpose();
    GinvResult res = finish(std::move(H), GinvKind::HaSymmetric, S, IndexSet{}, tol);
    return res;
}

GinvResult general_block(const Matrix& A, const IndexSet& S, const IndexSet& T,
                         const Tolerances& tol) {
    const Index r = numerical_rank(A, tol);
    check_cardinality(S.size(), r, "general_block");
    check_cardinality(T.size(), r, "general_block");

    Matrix block = submatrix(A, S, T);
    Matrix inv;
    try {
        inv = inverse(block);
    } catch (const SingularMatrix&) {
        throw SingularBlock("general_block: A[S,T] is singular");
    }

    Matrix H = Matrix::Zero(A.cols(), A.rows());
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j) H(T[j], S[i]) = inv(j, i);
    return finish(std::move(H), GinvKind::General, S, T, tol);
}

GinvResult rank1_column(const Matrix& A, const Tolerances& tol) {
    const Index r = numerical_rank(A, tol);
    if (r != 1)
        throw WrongRank("rank1_column: rank(A) = " + std::to_string(r) + ", expected 1");

    Index best = -1;
    double best_norm = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < A.cols(); ++j) {
        const double sq = A.col(j).squaredNorm();
        if (sq <= 0.0) continue;
        const double pinv_norm = A.col(j).lpNorm<1>() / sq;  // ||a^+||_1
        if (pinv_norm < best_norm) {
            best_norm = pinv_norm;
            best = j;
        }
    }
    return column_block(A, IndexSet({best}, A.cols()), tol);
}

}  // namespace ginv

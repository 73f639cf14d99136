#include "ginv/verify.hpp"

#include "ginv/linalg.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <cmath>

namespace ginv {

namespace {

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

Matrix sign_matrix(const Matrix& X, double zero_tol) {
    return X.unaryExpr([zero_tol](double v) {
        return std::abs(v) <= zero_tol ? 0.0 : sign_of(v);
    });
}

}  // namespace

PropertyReport check_properties(const Matrix& A, const Matrix& H, const Tolerances& tol) {
    if (H.rows() != A.cols() || H.cols() != A.rows())
        throw ShapeMismatch("check_properties: H must be n x m for m x n A");
    PropertyReport rep;
    const Matrix AH = A * H;
    const Matrix HA = H * A;
    rep.residual_p1 = max_norm(AH * A - A);
    rep.residual_p2 = max_norm(HA * H - H);
    rep.residual_p3 = max_norm(AH - AH.transpose());
    rep.residual_p4 = max_norm(HA - HA.transpose());
    rep.rank_A = numerical_rank(A, tol);
    rep.rank_H = numerical_rank(H, tol);
    rep.reflexive = rep.rank_A == rep.rank_H;
    return rep;
}

double least_squares_check(const Matrix& A, const Matrix& H, const Vector& b) {
    if (H.rows() != A.cols() || H.cols() != A.rows())
        throw ShapeMismatch("least_squares_check: H must be n x m for m x n A");
    if (b.size() != A.rows()) throw ShapeMismatch("least_squares_check: b must have m entries");
    const Vector x = H * b;
    return (A.transpose() * (A * x - b)).cwiseAbs().maxCoeff();
}

Certificate sym_certificate(const Matrix& A, const IndexSet& S, const Tolerances& tol) {
    if (!is_symmetric(A, tol.residual_tol * (1.0 + max_norm(A))))
        throw NotSymmetric("sym_certificate: input is not symmetric");
    Matrix block = submatrix(A, S, S);
    Matrix block_inv;
    try {
        block_inv = inverse(block);
    } catch (const SingularMatrix&) {
        throw SingularBlock("sym_certificate: A[S] is singular");
    }
    const Matrix M = sign_matrix(block_inv, 1e-14 * (1.0 + max_norm(block_inv)));
    const Matrix Wtil = block_inv.transpose() * M * block_inv.transpose();

    Certificate cert;
    cert.W = Matrix::Zero(A.rows(), A.cols());
    for (Index i = 0; i < S.size(); ++i)
        for (Index j = 0; j < S.size(); ++j) cert.W(S[i], S[j]) = Wtil(i, j);
    cert.dual_objective = one_norm(block_inv);
    // A W A with W supported on [S,S]: A[:,S] Wtil A[S,:]
    const Matrix AWA = cols_of(A, S) * Wtil * rows_of(A, S);
    cert.feasibility_scale = max_norm(AWA);
    cert.implied_lower_bound =
        cert.feasibility_scale > 0.0 ? cert.dual_objective / cert.feasibility_scale : 0.0;
    return cert;
}

Certificate ah_certificate(const Matrix& A, const IndexSet& S, const IndexSet& T,
                           const Tolerances& tol) {
    const Index m = A.rows();
    Matrix Atil = submatrix(A, S, T);
    Matrix Atil_inv;
    try {
        Atil_inv = inverse(Atil);
    } catch (const SingularMatrix&) {
        throw SingularBlock("ah_certificate: A[S,T] is singular");
    }
    const Matrix Ahat = cols_of(A, T);
    Eigen::ColPivHouseholderQR<Matrix> qr(Ahat);
    qr.setThreshold(tol.rank_rel_tol);
    if (qr.rank() < T.size())
        throw RankDeficientBlock("ah_certificate: A[:,T] is rank deficient");
    const Matrix Ahat_pinv = qr.solve(Matrix::Identity(m, m));  // r x m
    const Matrix E = sign_matrix(Ahat_pinv, 1e-14 * (1.0 + max_norm(Ahat_pinv)));

    // What = Atil^{-T} E (Ahat^T)^+ = Atil^{-T} E Ahat (Ahat^T Ahat)^{-1}
    const Matrix AhatT_pinv = Ahat_pinv.transpose();  // (Ahat^T)^+ = (Ahat^+)^T, m x r
    const Matrix What = Atil_inv.transpose() * (E * AhatT_pinv);

    Certificate cert;
    cert.W = Matrix::Zero(A.rows(), A.cols());
    for (Index i = 0; i < S.size(); ++i)
        for (Index j = 0; j < T.size(); ++j) cert.W(S[i], T[j]) = What(i, j);
    cert.dual_objective = one_norm(Ahat_pinv);

    // U = Ahat What^T D - D^T What Ahat^T + D^T Atil^{-T} E - E^T Atil^{-1} D
    // with D the 0/1 selector for S. A^T U is assembled from the factored
    // products so the m x m skew matrix itself is only formed for small m.
    const Matrix AtS = rows_of(A, S).transpose();        // n x r, equals A^T D^T
    const Matrix AtAhat = A.transpose() * Ahat;          // n x r
    const Matrix AtEt = A.transpose() * E.transpose();   // n x r

    Matrix WhatT_D = Matrix::Zero(T.size(), m);  // What^T D: r x m, columns S
    Matrix inv_D = Matrix::Zero(T.size(), m);    // Atil^{-1} D
    for (Index k = 0; k < S.size(); ++k) {
        WhatT_D.col(S[k]) = What.transpose().col(k);
        inv_D.col(S[k]) = Atil_inv.col(k);
    }
    const Matrix AtU = AtAhat * WhatT_D - AtS * (What * Ahat.transpose()) +
                       AtS * (Atil_inv.transpose() * E) - AtEt * inv_D;

    // A^T W A^T with W supported on [S,T]: (A[S,:])^T What (A[:,T])^T
    const Matrix AtWAt = AtS * What * Ahat.transpose();
    cert.feasibility_scale = max_norm(AtWAt + AtU);
    cert.implied_lower_bound =
        cert.feasibility_scale > 0.0 ? cert.dual_objective / cert.feasibility_scale : 0.0;

    if (m <= 512) {
        Matrix D = Matrix::Zero(S.size(), m);
        for (Index k = 0; k < S.size(); ++k) D(k, S[k]) = 1.0;
        const Matrix Z =
            Ahat * What.transpose() * D + D.transpose() * Atil_inv.transpose() * E;
        cert.U = (Z - Z.transpose()).eval();  // skew exactly, entry by entry
    }
    return cert;
}

double certified_ratio(const Matrix& A, const GinvResult& result, const Certificate& cert) {
    if (result.H.rows() != A.cols() || result.H.cols() != A.rows())
        throw ShapeMismatch("certified_ratio: result does not match A");
    if (cert.dual_objective <= 0.0)
        throw DegenerateCertificate("certified_ratio: dual objective is not positive");
    return result.one_norm * cert.feasibility_scale / cert.dual_objective;
}

void to_json(nlohmann::json& j, const PropertyReport& report) {
    j = nlohmann::json{{"residual_p1", report.residual_p1},
                       {"residual_p2", report.residual_p2},
                       {"residual_p3", report.residual_p3},
                       {"residual_p4", report.residual_p4},
                       {"rank_A", report.rank_A},
                       {"rank_H", report.rank_H},
                       {"reflexive", report.reflexive}};
}

void to_json(nlohmann::json& j, const Certificate& cert) {
    j = nlohmann::json{{"dual_objective", cert.dual_objective},
                       {"feasibility_scale", cert.feasibility_scale},
                       {"implied_lower_bound", cert.implied_lower_bound}};
    if (cert.certified_ratio) j["certified_ratio"] = *cert.certified_ratio;
    j["W_nnz"] = nnz(cert.W, 0.0);
    j["has_skew_term"] = cert.U.has_value();
}

}  // namespace ginv

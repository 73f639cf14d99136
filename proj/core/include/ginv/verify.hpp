#pragma once

#include "ginv/blocks.hpp"
#include "ginv/types.hpp"

#include <json.hpp>

#include <optional>

namespace ginv {

/// Max-norm residuals of the four Moore-Penrose properties plus the rank
/// test for reflexivity (rank(H) = rank(A)).
struct PropertyReport {
    double residual_p1 = 0.0;  // ||AHA - A||_max
    double residual_p2 = 0.0;  // ||HAH - H||_max
    double residual_p3 = 0.0;  // ||(AH)^T - AH||_max
    double residual_p4 = 0.0;  // ||(HA)^T - HA||_max
    Index rank_A = 0;
    Index rank_H = 0;
    bool reflexive = false;
};

/// Dual objects certifying solution quality at runtime. Scaling W (and U)
/// by 1/feasibility_scale gives a dual-feasible point, so
/// implied_lower_bound = dual_objective / feasibility_scale bounds the
/// 1-norm of every competing solution from below.
struct Certificate {
    Matrix W;
    std::optional<Matrix> U;  // skew term of the ah dual; absent for symmetric
    double dual_objective = 0.0;
    double feasibility_scale = 0.0;
    double implied_lower_bound = 0.0;
    std::optional<double> certified_ratio;  // filled by certified_ratio()
};

PropertyReport check_properties(const Matrix& A, const Matrix& H, const Tolerances& tol = {});

/// Normal-equation residual ||A^T (A(Hb) - b)||_max of the candidate
/// least-squares solution x = Hb.
double least_squares_check(const Matrix& A, const Matrix& H, const Vector& b);

/// W zero except W[S,S] = A[S]^{-T} sign(A[S]^{-1}) A[S]^{-T}; dual
/// objective equals ||A[S]^{-1}||_1. At a (1+eps)-local maximizer the
/// feasibility scale is at most r^2 (1+eps).
Certificate sym_certificate(const Matrix& A, const IndexSet& S, const Tolerances& tol = {});

/// The (W, U) pair with Ahat^T W A^T + Ahat^T U = sign(Ahat^+) and
/// <A,W> = ||Ahat^+||_1. At a (1+eps)-local maximizer the feasibility scale
/// is at most r (1+eps). U is materialized only for moderate m; the scale is
/// always computed through the factored products.
Certificate ah_certificate(const Matrix& A, const IndexSet& S, const IndexSet& T,
                           const Tolerances& tol = {});

/// A-posteriori bound on one_norm / optimum:
/// result.one_norm * feasibility_scale / dual_objective.
double certified_ratio(const Matrix& A, const GinvResult& result, const Certificate& cert);

void to_json(nlohmann::json& j, const PropertyReport& report);
void to_json(nlohmann::json& j, const Certificate& cert);

}  // namespace ginv

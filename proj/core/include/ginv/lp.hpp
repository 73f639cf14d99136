#pragma once

#include "ginv/blocks.hpp"
#include "ginv/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ginv {

enum class LpKind { P1, P1Sym, P13, P123 };

const char* to_string(LpKind kind);

/// Equality-form 1-norm minimization model. The solver splits each variable
/// x = x+ - x- with x+, x- >= 0; eq_matrix is stored over the unsplit
/// variables and has full row rank (redundant rows are eliminated at build
/// time by a rank-revealing factorization).
struct LpModel {
    LpKind kind = LpKind::P1;
    Index m = 0, n = 0, r = 0;  // shape and rank of the source matrix A
    Vector objective;           // 1-norm weight per unsplit variable
    Matrix eq_matrix;           // p x N
    Vector eq_rhs;              // p
    std::vector<std::pair<Index, Index>> vars;  // variable -> (row, col) of H
};

/// Basic (vertex) solution: at most rank-many split variables are nonzero.
struct LpSolution {
    Matrix H;
    double objective_value = 0.0;
    std::vector<Index> basis;  // basic split-variable indices in row order
    bool is_vertex = false;
    Index iterations = 0;
};

struct SimplexOptions {
    Index max_iterations = 500000;
    double pivot_tol = 1e-11;
    double cost_tol = 1e-9;
};

/// min ||H||_1 s.t. AHA = A.
LpModel build_p1(const Matrix& A, const Tolerances& tol = {});

/// min ||H||_1 s.t. AHA = A, H = H^T (A symmetric). Parametrized on the
/// lower triangle of H with off-diagonal objective weight 2.
LpModel build_p1_sym(const Matrix& A, const Tolerances& tol = {});

/// min ||H||_1 s.t. AH = AA^+ (feasible set = {H : P1 and P3}).
LpModel build_p13(const Matrix& A, const Tolerances& tol = {});

/// min ||H||_1 s.t. AH = A Hhat A = AA^+ and H(A Hhat) = H
/// (feasible set = {H : P1, P2, P3}); Hhat must be a column-block
/// ah-symmetric reflexive generalized inverse.
LpModel build_p123(const Matrix& A, const GinvResult& Hhat, const Tolerances& tol = {});

/// Revised simplex over the split variables; returns an optimal vertex.
LpSolution simplex_solve(const LpModel& model, const SimplexOptions& opts = {});

/// Dual objective <A,W> and feasibility scale s = ||A^T W A^T (+ A^T U)||_max.
/// W/s (and U/s) is feasible for the dual, so <A,W>/s lower-bounds the primal
/// optimum; s = 0 is reported as-is (bound 0 by convention).
std::pair<double, double> dual_feasibility(const Matrix& A, const Matrix& W,
                                           const std::optional<Matrix>& U = std::nullopt,
                                           const Tolerances& tol = {});

/// Text export in CPLEX LP format with 17-significant-digit coefficients.
std::string export_lp(const LpModel& model);

}  // namespace ginv

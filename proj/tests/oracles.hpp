// Test-only reference computations, kept independent of the library code
// paths they are used to check.
#pragma once

#include <ginv/lp.hpp>
#include <ginv/types.hpp>

#include <Eigen/Dense>

#include <limits>
#include <random>
#include <vector>

namespace oracle {

using ginv::Index;
using ginv::Matrix;
using ginv::Vector;

// Determinant by recursive cofactor expansion (small matrices only).
inline double det_cofactor(const Matrix& A) {
    const Index n = A.rows();
    if (n == 1) return A(0, 0);
    if (n == 2) return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    double det = 0.0;
    for (Index j = 0; j < n; ++j) {
        Matrix minor(n - 1, n - 1);
        for (Index i = 1; i < n; ++i) {
            Index c = 0;
            for (Index k = 0; k < n; ++k) {
                if (k == j) continue;
                minor(i - 1, c++) = A(i, k);
            }
        }
        det += ((j % 2) ? -1.0 : 1.0) * A(0, j) * det_cofactor(minor);
    }
    return det;
}

inline Matrix take(const Matrix& A, const std::vector<Index>& rows,
                   const std::vector<Index>& cols) {
    Matrix B(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j)
            B(static_cast<Index>(i), static_cast<Index>(j)) = A(rows[i], cols[j]);
    return B;
}

// Exhaustive vertex enumeration over split-column bases of an LpModel.
// Returns the minimum objective over all feasible basic solutions.
inline double lp_vertex_enumeration(const ginv::LpModel& model, double feas_tol = 1e-9) {
    const Index p = model.eq_matrix.rows();
    const Index N = model.eq_matrix.cols();
    const Index total = 2 * N;
    std::vector<Index> pick(static_cast<std::size_t>(p));
    for (Index i = 0; i < p; ++i) pick[static_cast<std::size_t>(i)] = i;

    double best = std::numeric_limits<double>::infinity();
    auto column = [&](Index v) -> Vector {
        return v < N ? Vector(model.eq_matrix.col(v)) : Vector(-model.eq_matrix.col(v - N));
    };
    while (true) {
        Matrix B(p, p);
        for (Index i = 0; i < p; ++i) B.col(i) = column(pick[static_cast<std::size_t>(i)]);
        Eigen::FullPivLU<Matrix> lu(B);
        if (lu.isInvertible()) {
            Vector xB = lu.solve(model.eq_rhs);
            if ((xB.array() >= -feas_tol).all()) {
                double obj = 0.0;
                for (Index i = 0; i < p; ++i)
                    obj += model.objective(pick[static_cast<std::size_t>(i)] % N) * xB(i);
                best = std::min(best, obj);
            }
        }
        // next combination
        Index k = p - 1;
        while (k >= 0 && pick[static_cast<std::size_t>(k)] == total - p + k) --k;
        if (k < 0) break;
        ++pick[static_cast<std::size_t>(k)];
        for (Index j = k + 1; j < p; ++j)
            pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
    return best;
}

// Largest |det| ratio over all single column swaps of T (S fixed).
inline double best_column_swap_ratio(const Matrix& A, const std::vector<Index>& S,
                                     const std::vector<Index>& T) {
    const double base = std::abs(det_cofactor(take(A, S, T)));
    double best = 0.0;
    for (std::size_t pos = 0; pos < T.size(); ++pos)
        for (Index j = 0; j < A.cols(); ++j) {
            if (std::find(T.begin(), T.end(), j) != T.end()) continue;
            std::vector<Index> T2 = T;
            T2[pos] = j;
            best = std::max(best, std::abs(det_cofactor(take(A, S, T2))) / base);
        }
    return best;
}

inline double best_row_swap_ratio(const Matrix& A, const std::vector<Index>& S,
                                  const std::vector<Index>& T) {
    const double base = std::abs(det_cofactor(take(A, S, T)));
    double best = 0.0;
    for (std::size_t pos = 0; pos < S.size(); ++pos)
        for (Index i = 0; i < A.rows(); ++i) {
            if (std::find(S.begin(), S.end(), i) != S.end()) continue;
            std::vector<Index> S2 = S;
            S2[pos] = i;
            best = std::max(best, std::abs(det_cofactor(take(A, S2, T))) / base);
        }
    return best;
}

// Largest principal-swap ratio |det A[S']| / |det A[S]| over single swaps.
inline double best_principal_swap_ratio(const Matrix& A, const std::vector<Index>& S) {
    const double base = std::abs(det_cofactor(take(A, S, S)));
    double best = 0.0;
    for (std::size_t pos = 0; pos < S.size(); ++pos)
        for (Index j = 0; j < A.rows(); ++j) {
            if (std::find(S.begin(), S.end(), j) != S.end()) continue;
            std::vector<Index> S2 = S;
            S2[pos] = j;
            best = std::max(best, std::abs(det_cofactor(take(A, S2, S2))) / base);
        }
    return best;
}

// Deterministic rank-r test matrix with small integer factors.
inline Matrix random_rank_matrix(std::mt19937& rng, Index m, Index n, Index r) {
    std::uniform_int_distribution<int> dist(-3, 3);
    while (true) {
        Matrix L(m, r), R(r, n);
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < r; ++j) L(i, j) = dist(rng);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < n; ++j) R(i, j) = dist(rng);
        Matrix A = L * R;
        Eigen::BDCSVD<Matrix> svd(A);
        const auto& sv = svd.singularValues();
        if (sv(r - 1) > 1e-6 * sv(0) && sv(r - 1) > 1e-8) return A;
    }
}

inline Matrix random_symmetric_rank(std::mt19937& rng, Index n, Index r) {
    std::uniform_int_distribution<int> dist(-3, 3);
    while (true) {
        Matrix L(n, r);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < r; ++j) L(i, j) = dist(rng);
        Matrix A = L * L.transpose();
        Eigen::BDCSVD<Matrix> svd(A);
        const auto& sv = svd.singularValues();
        if (sv(r - 1) > 1e-6 * sv(0) && sv(r - 1) > 1e-8) return A;
    }
}

}  // namespace oracle

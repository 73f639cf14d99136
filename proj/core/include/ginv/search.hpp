#pragma once

#include "ginv/blocks.hpp"
#include "ginv/types.hpp"

#include <utility>
#include <vector>

namespace ginv {

enum class PivotStrategy { FirstImproving, BestImproving };

struct SearchConfig {
    /// Accept a swap only when it improves the objective by a factor
    /// greater than 1 + epsilon (plus a 1e-12 guard against cycling).
    double epsilon = 0.0;
    /// Cap on accepted swaps; 0 selects 10 * max(rows, cols).
    Index max_sweeps = 0;
    PivotStrategy pivot = PivotStrategy::FirstImproving;
    Tolerances tol;
};

/// Index sets reached by a local search plus the accepted-swap trace.
struct SearchOutcome {
    IndexSet S;
    IndexSet T;
    std::vector<SwapRecord> trace;
    bool sweep_limit_hit = false;
};

/// Nonsingular r x r seed block found by Gaussian elimination with
/// complete pivoting. Throws ZeroMatrix.
std::pair<IndexSet, IndexSet> init_general(const Matrix& A, const Tolerances& tol = {});

/// Nonsingular r x r principal seed block of a symmetric matrix, found by
/// greedy pivoted symmetric elimination (1x1 pivots, 2x2 fallback).
IndexSet init_principal(const Matrix& A, const Tolerances& tol = {});

/// Column swaps on A[S,:] with S held fixed, until |det A[S,T]| cannot be
/// improved by a factor above 1 + epsilon. Ratios come from
/// A[S,T]^{-1} A[S,T^c] (Cramer's rule).
SearchOutcome local_search_columns(const Matrix& A, const IndexSet& S, IndexSet T,
                                   const SearchConfig& cfg = {});

/// Principal swaps on symmetric A: swapping i in S for j outside multiplies
/// |det A[S]| by x_i^2 where A[S] x = A[S,{j}].
SearchOutcome local_search_principal(const Matrix& A, IndexSet S,
                                     const SearchConfig& cfg = {});

/// Alternating row/column sweeps until neither side admits a swap with
/// ratio above 1 + epsilon.
SearchOutcome local_search_general(const Matrix& A, IndexSet S, IndexSet T,
                                   const SearchConfig& cfg = {});

/// Local minimizer of ||A[S,T]^{-1}||_1 under single row/column swaps.
SearchOutcome local_search_onenorm(const Matrix& A, IndexSet S, IndexSet T,
                                   const SearchConfig& cfg = {});

/// End-to-end pipelines: initialize, search, build the block construction.
/// The returned GinvResult carries the accepted-swap trace.
GinvResult sym_reflexive_ginv(const Matrix& A, const SearchConfig& cfg = {});
GinvResult ah_symmetric_ginv(const Matrix& A, const SearchConfig& cfg = {});
GinvResult ha_symmetric_ginv(const Matrix& A, const SearchConfig& cfg = {});
GinvResult general_reflexive_ginv(const Matrix& A, const SearchConfig& cfg = {});

}  // namespace ginv

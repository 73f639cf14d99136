#include "ginv/search.hpp"

#include "ginv/linalg.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>

namespace ginv {

namespace {

constexpr double kCycleGuard = 1e-12;

Index sweep_cap(const SearchConfig& cfg, const Matrix& A) {
    return cfg.max_sweeps > 0 ? cfg.max_sweeps : 10 * std::max(A.rows(), A.cols());
}

struct Candidate {
    Index pos = -1;   // position within the index set
    Index in = -1;    // entering index (original numbering)
    double ratio = 0.0;
    SwapRecord::Side side = SwapRecord::Side::Column;
};

// Scan a ratio table (positions x complement) for a swap above the threshold.
// FirstImproving returns the first hit in (out position, in index) order;
// BestImproving the strictly largest ratio, earliest on ties.
std::optional<Candidate> pick(const Matrix& ratios, const IndexSet& complement,
                              double threshold, PivotStrategy strategy,
                              SwapRecord::Side side) {
    std::optional<Candidate> best;
    for (Index p = 0; p < ratios.rows(); ++p) {
        for (Index c = 0; c < ratios.cols(); ++c) {
            const double rho = std::abs(ratios(p, c));
            if (rho <= threshold) continue;
            Candidate cand{p, complement[c], rho, side};
            if (strategy == PivotStrategy::FirstImproving) return cand;
            if (!best || rho > best->ratio) best = cand;
        }
    }
    return best;
}

Matrix block_inverse_or_throw(const Matrix& A, const IndexSet& S, const IndexSet& T) {
    try {
        return inverse(submatrix(A, S, T));
    } catch (const SingularMatrix&) {
        throw SingularBlock("local search: A[S,T] is singular for S = " + S.to_string() +
                            ", T = " + T.to_string());
    }
}

}  // namespace

std::pair<IndexSet, IndexSet> init_general(const Matrix& A, const Tolerances& tol) {
    require_finite(A, "init_general");
    const Index r = numerical_rank(A, tol);
    if (r == 0) throw ZeroMatrix("init_general: zero matrix");

    Matrix U = A;
    std::vector<Index> rows, cols;
    std::vector<bool> row_used(static_cast<std::size_t>(A.rows()), false);
    std::vector<bool> col_used(static_cast<std::size_t>(A.cols()), false);

    for (Index k = 0; k < r; ++k) {
        Index pi = -1, pj = -1;
        double pmax = 0.0;
        for (Index i = 0; i < U.rows(); ++i) {
            if (row_used[static_cast<std::size_t>(i)]) continue;
            for (Index j = 0; j < U.cols(); ++j) {
                if (col_used[static_cast<std::size_t>(j)]) continue;
                const double v = std::abs(U(i, j));
                if (v > pmax) {
                    pmax = v;
                    pi = i;
                    pj = j;
                }
            }
        }
        if (pi < 0 || pmax <= 0.0)
            throw NumericalBreakdown("init_general: pivots exhausted before reaching rank " +
                                     std::to_string(r));
        rows.push_back(pi);
        cols.push_back(pj);
        row_used[static_cast<std::size_t>(pi)] = true;
        col_used[static_cast<std::size_t>(pj)] = true;
        const double piv = U(pi, pj);
        for (Index i = 0; i < U.rows(); ++i) {
            if (row_used[static_cast<std::size_t>(i)]) continue;
            const double f = U(i, pj) / piv;
            if (f != 0.0) U.row(i) -= f * U.row(pi);
        }
    }
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());
    return {IndexSet(std::move(rows), A.rows()), IndexSet(std::move(cols), A.cols())};
}

IndexSet init_principal(const Matrix& A, const Tolerances& tol) {
    require_finite(A, "init_principal");
    if (!is_symmetric(A, tol.residual_tol * (1.0 + max_norm(A))))
        throw NotSymmetric("init_principal: input is not symmetric");
    const Index r = numerical_rank(A, tol);
    if (r == 0) throw ZeroMatrix("init_principal: zero matrix");

    // Bunch-Parlett style: a 1x1 diagonal pivot is taken when it is within
    // alpha of the largest off-diagonal entry, otherwise a 2x2 pivot.
    const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
    Matrix M = A;
    std::vector<Index> picked;
    std::vector<bool> used(static_cast<std::size_t>(A.rows()), false);

    auto active = [&](Index i) { return !used[static_cast<std::size_t>(i)]; };

    while (static_cast<Index>(picked.size()) < r) {
        Index d = -1, oi = -1, oj = -1;
        double dmax = 0.0, omax = 0.0;
        for (Index i = 0; i < M.rows(); ++i) {
            if (!active(i)) continue;
            if (std::abs(M(i, i)) > dmax) {
                dmax = std::abs(M(i, i));
                d = i;
            }
            for (Index j = i + 1; j < M.cols(); ++j) {
                if (!active(j)) continue;
                if (std::abs(M(i, j)) > omax) {
                    omax = std::abs(M(i, j));
                    oi = i;
                    oj = j;
                }
            }
        }
        if (dmax <= 0.0 && omax <= 0.0)
            throw NumericalBreakdown("init_principal: pivots exhausted before reaching rank " +
                                     std::to_string(r));

        const Index remaining = r - static_cast<Index>(picked.size());
        std::vector<Index> block;
        if (dmax >= alpha * omax || remaining == 1) {
            if (d < 0 || dmax <= 0.0)
                throw NumericalBreakdown("init_principal: no usable 1x1 pivot");
            block = {d};
        } else {
            block = {oi, oj};
        }

        IndexSet P(block, A.rows());
        Matrix Pinv = inverse(submatrix(M, P, P));
        for (Index b : block) used[static_cast<std::size_t>(b)] = true;
        // Schur complement update on the active part
        std::vector<Index> act;
        for (Index i = 0; i < M.rows(); ++i)
            if (active(i)) act.push_back(i);
        IndexSet Act(act, A.rows());
        Matrix cross = submatrix(M, Act, P);
        Matrix update = cross * Pinv * cross.transpose();
        for (Index a = 0; a < Act.size(); ++a)
            for (Index b = 0; b < Act.size(); ++b) M(Act[a], Act[b]) -= update(a, b);
        picked.insert(picked.end(), block.begin(), block.end());
    }
    std::sort(picked.begin(), picked.end());
    return IndexSet(std::move(picked), A.rows());
}

SearchOutcome local_search_columns(const Matrix& A, const IndexSet& S, IndexSet T,
                                   const SearchConfig& cfg) {
    const double threshold = 1.0 + cfg.epsilon + kCycleGuard;
    const Index cap = sweep_cap(cfg, A);

    SearchOutcome out;
    out.sweep_limit_hit = false;
    for (Index sweep = 0;; ++sweep) {
        Matrix inv = block_inverse_or_throw(A, S, T);
        IndexSet comp = T.complement();
        if (comp.empty()) break;
        Matrix ratios = inv * submatrix(A, S, comp);
        auto cand = pick(ratios, comp, threshold, cfg.pivot, SwapRecord::Side::Column);
        if (!cand) break;
        if (sweep >= cap) {
            out.sweep_limit_hit = true;
            break;
        }
        out.trace.push_back({T[cand->pos], cand->in, cand->side, cand->ratio});
        T = T.with_swapped(cand->pos, cand->in);
    }
    out.S = S;
    out.T = std::move(T);
    return out;
}

SearchOutcome local_search_principal(const Matrix& A, IndexSet S, const SearchConfig& cfg) {
    if (!is_symmetric(A, cfg.tol.residual_tol * (1.0 + max_norm(A))))
        throw NotSymmetric("local_search_principal: input is not symmetric");
    const double threshold = 1.0 + cfg.epsilon + kCycleGuard;
    const Index cap = sweep_cap(cfg, A);

    SearchOutcome out;
    for (Index sweep = 0;; ++sweep) {
        Matrix inv = block_inverse_or_throw(A, S, S);
        IndexSet comp = S.complement();
        if (comp.empty()) break;
        // det(A[S \ i + j]) = x_i^2 det(A[S]) with A[S] x = A[S,{j}]
        Matrix ratios = (inv * submatrix(A, S, comp)).array().square();
        auto cand = pick(ratios, comp, threshold, cfg.pivot, SwapRecord::Side::Principal);
        if (!cand) break;
        if (sweep >= cap) {
            out.sweep_limit_hit = true;
            break;
        }
        out.trace.push_back({S[cand->pos], cand->in, cand->side, cand->ratio});
        S = S.with_swapped(cand->pos, cand->in);
    }
    out.S = std::move(S);
    out.T = out.S;
    return out;
}

SearchOutcome local_search_general(const Matrix& A, IndexSet S, IndexSet T,
                                   const SearchConfig& cfg) {
    const double threshold = 1.0 + cfg.epsilon + kCycleGuard;
    const Index cap = sweep_cap(cfg, A);

    SearchOutcome out;
    for (Index sweep = 0;; ++sweep) {
        Matrix inv = block_inverse_or_throw(A, S, T);
        IndexSet col_comp = T.complement();
        IndexSet row_comp = S.complement();

        std::optional<Candidate> cand;
        if (!col_comp.empty()) {
            Matrix col_ratios = inv * submatrix(A, S, col_comp);
            cand = pick(col_ratios, col_comp, threshold, cfg.pivot, SwapRecord::Side::Column);
        }
        if (!row_comp.empty() && (!cand || cfg.pivot == PivotStrategy::BestImproving)) {
            // ratio for replacing row S[p] with row i is |(A[{i},T] A[S,T]^{-1})_p|
            Matrix row_ratios = (submatrix(A, row_comp, T) * inv).transpose();
            auto row_cand =
                pick(row_ratios, row_comp, threshold, cfg.pivot, SwapRecord::Side::Row);
            if (row_cand && (!cand || row_cand->ratio > cand->ratio)) cand = row_cand;
        }
        if (!cand) break;
        if (sweep >= cap) {
            out.sweep_limit_hit = true;
            break;
        }
        if (cand->side == SwapRecord::Side::Column) {
            out.trace.push_back({T[cand->pos], cand->in, cand->side, cand->ratio});
            T = T.with_swapped(cand->pos, cand->in);
        } else {
            out.trace.push_back({S[cand->pos], cand->in, cand->side, cand->ratio});
            S = S.with_swapped(cand->pos, cand->in);
        }
    }
    out.S = std::move(S);
    out.T = std::move(T);
    return out;
}

SearchOutcome local_search_onenorm(const Matrix& A, IndexSet S, IndexSet T,
                                   const SearchConfig& cfg) {
    const Index cap = sweep_cap(cfg, A);

    double current = one_norm(block_inverse_or_throw(A, S, T));

    auto try_set = [&](const IndexSet& rows, const IndexSet& cols) -> std::optional<double> {
        try {
            return one_norm(inverse(submatrix(A, rows, cols)));
        } catch (const SingularMatrix&) {
            return std::nullopt;  // singular neighbors are not in the search space
        }
    };

    SearchOutcome out;
    for (Index sweep = 0;; ++sweep) {
        struct Move {
            SwapRecord::Side side;
            Index pos, in;
            double value;
        };
        std::optional<Move> chosen;

        auto consider = [&](SwapRecord::Side side, Index pos, Index in, double value) {
            if (value >= current * (1.0 - kCycleGuard)) return false;
            if (!chosen || value < chosen->value) chosen = Move{side, pos, in, value};
            return cfg.pivot == PivotStrategy::FirstImproving;
        };

        const IndexSet row_comp = S.complement();
        const IndexSet col_comp = T.complement();
        bool stop = false;
        for (Index p = 0; p < S.size() && !stop; ++p)
            for (Index c = 0; c < row_comp.size() && !stop; ++c) {
                const Index in = row_comp[c];
                auto v = try_set(S.with_swapped(p, in), T);
                if (v) stop = consider(SwapRecord::Side::Row, p, in, *v);
            }
        for (Index p = 0; p < T.size() && !stop; ++p)
            for (Index c = 0; c < col_comp.size() && !stop; ++c) {
                const Index in = col_comp[c];
                auto v = try_set(S, T.with_swapped(p, in));
                if (v) stop = consider(SwapRecord::Side::Column, p, in, *v);
            }

        if (!chosen) break;
        if (sweep >= cap) {
            out.sweep_limit_hit = true;
            break;
        }
        const double ratio = current / chosen->value;
        if (chosen->side == SwapRecord::Side::Row) {
            out.trace.push_back({S[chosen->pos], chosen->in, chosen->side, ratio});
            S = S.with_swapped(chosen->pos, chosen->in);
        } else {
            out.trace.push_back({T[chosen->pos], chosen->in, chosen->side, ratio});
            T = T.with_swapped(chosen->pos, chosen->in);
        }
        current = chosen->value;
    }
    out.S = std::move(S);
    out.T = std::move(T);
    return out;
}

GinvResult sym_reflexive_ginv(const Matrix& A, const SearchConfig& cfg) {
    IndexSet S0 = init_principal(A, cfg.tol);
    SearchOutcome found = local_search_principal(A, S0, cfg);
    GinvResult res = symmetric_block(A, found.S, cfg.tol);
    res.trace = std::move(found.trace);
    res.sweep_limit_hit = found.sweep_limit_hit;
    return res;
}

GinvResult ah_symmetric_ginv(const Matrix& A, const SearchConfig& cfg) {
    auto [S0, T0] = init_general(A, cfg.tol);
    SearchOutcome found = local_search_columns(A, S0, T0, cfg);
    GinvResult res = column_block(A, found.T, cfg.tol);
    res.S = found.S;
    res.trace = std::move(found.trace);
    res.sweep_limit_hit = found.sweep_limit_hit;
    return res;
}

GinvResult ha_symmetric_ginv(const Matrix& A, const SearchConfig& cfg) {
    GinvResult ah = ah_symmetric_ginv(A.transpose(), cfg);
    GinvResult res;
    res.H = ah.H.transpose();
    res.kind = GinvKind::HaSymmetric;
    res.S = ah.T;  // rows of A used by the construction
    res.T = ah.S;  // columns of A the search held fixed
    res.one_norm = ah.one_norm;
    res.nnz = ah.nnz;
    for (SwapRecord rec : ah.trace) {
        rec.side = rec.side == SwapRecord::Side::Column ? SwapRecord::Side::Row
                                                        : SwapRecord::Side::Column;
        res.trace.push_back(rec);
    }
    res.sweep_limit_hit = ah.sweep_limit_hit;
    return res;
}

GinvResult general_reflexive_ginv(const Matrix& A, const SearchConfig& cfg) {
    auto [S0, T0] = init_general(A, cfg.tol);
    SearchOutcome found = local_search_general(A, S0, T0, cfg);
    GinvResult res = general_block(A, found.S, found.T, cfg.tol);
    res.trace = std::move(found.trace);
    res.sweep_limit_hit = found.sweep_limit_hit;
    return res;
}

}  // namespace ginv

#include "ginv/lp.hpp"

#include "ginv/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace ginv {

const char* to_string(LpKind kind) {
    switch (kind) {
        case LpKind::P1: return "p1";
        case LpKind::P1Sym: return "p1sym";
        case LpKind::P13: return "p13";
        case LpKind::P123: return "p123";
    }
    return "?";
}

namespace {

// Keep a maximal independent row subset, in original order. The full systems
// are consistent by construction, so dropping dependent rows preserves the
// feasible set.
void reduce_rows(Matrix& E, Vector& b) {
    Eigen::ColPivHouseholderQR<Matrix> qr(E.transpose());
    qr.setThreshold(1e-10);
    const Index rank = qr.rank();
    std::vector<Index> keep(static_cast<std::size_t>(rank));
    for (Index k = 0; k < rank; ++k)
        keep[static_cast<std::size_t>(k)] = qr.colsPermutation().indices()(k);
    std::sort(keep.begin(), keep.end());
    Matrix Er(rank, E.cols());
    Vector br(rank);
    for (Index k = 0; k < rank; ++k) {
        Er.row(k) = E.row(keep[static_cast<std::size_t>(k)]);
        br(k) = b(keep[static_cast<std::size_t>(k)]);
    }
    E = std::move(Er);
    b = std::move(br);
}

std::vector<std::pair<Index, Index>> full_vars(Index hrows, Index hcols) {
    std::vector<std::pair<Index, Index>> vars;
    vars.reserve(static_cast<std::size_t>(hrows * hcols));
    for (Index j = 0; j < hcols; ++j)
        for (Index i = 0; i < hrows; ++i) vars.emplace_back(i, j);
    return vars;
}

Matrix assemble_H(const LpModel& model, const Vector& x) {
    Matrix H = Matrix::Zero(model.n, model.m);
    for (std::size_t v = 0; v < model.vars.size(); ++v) {
        const auto [i, j] = model.vars[v];
        H(i, j) = x(static_cast<Index>(v));
        if (model.kind == LpKind::P1Sym) H(j, i) = x(static_cast<Index>(v));
    }
    return H;
}

}  // namespace

LpModel build_p1(const Matrix& A, const Tolerances& tol) {
    require_finite(A, "build_p1");
    const Index m = A.rows(), n = A.cols();
    LpModel model;
    model.kind = LpKind::P1;
    model.m = m;
    model.n = n;
    model.r = numerical_rank(A, tol);
    model.vars = full_vars(n, m);
    const Index N = n * m;
    model.objective = Vector::Ones(N);

    // (AHA)_{ij} = sum_{k,l} A_{ik} A_{lj} H_{kl} = A_{ij}
    Matrix E(m * n, N);
    Vector b(m * n);
    Index row = 0;
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < n; ++j, ++row) {
            for (Index v = 0; v < N; ++v) {
                const auto [k, l] = model.vars[static_cast<std::size_t>(v)];
                E(row, v) = A(i, k) * A(l, j);
            }
            b(row) = A(i, j);
        }
    reduce_rows(E, b);
    model.eq_matrix = std::move(E);
    model.eq_rhs = std::move(b);
    return model;
}

LpModel build_p1_sym(const Matrix& A, const Tolerances& tol) {
    require_finite(A, "build_p1_sym");
    if (!is_symmetric(A, tol.residual_tol * (1.0 + max_norm(A))))
        throw NotSymmetric("build_p1_sym: input is not symmetric");
    const Index n = A.rows();
    LpModel model;
    model.kind = LpKind::P1Sym;
    model.m = n;
    model.n = n;
    model.r = numerical_rank(A, tol);
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i) model.vars.emplace_back(i, j);  // lower triangle
    const Index N = static_cast<Index>(model.vars.size());
    model.objective = Vector(N);
    for (Index v = 0; v < N; ++v)
        model.objective(v) = model.vars[static_cast<std::size_t>(v)].first ==
                                     model.vars[static_cast<std::size_t>(v)].second
                                 ? 1.0
                                 : 2.0;

    // lower triangle of AHA = A with H symmetric:
    // coefficient of h_{kl} (k > l) is A_{ik} A_{lj} + A_{il} A_{kj}
    Matrix E(n * (n + 1) / 2, N);
    Vector b(E.rows());
    Index row = 0;
    for (Index j = 0; j < n; ++j)
        for (Index i = j; i < n; ++i, ++row) {
            for (Index v = 0; v < N; ++v) {
                const auto [k, l] = model.vars[static_cast<std::size_t>(v)];
                E(row, v) = k == l ? A(i, k) * A(k, j) : A(i, k) * A(l, j) + A(i, l) * A(k, j);
            }
            b(row) = A(i, j);
        }
    reduce_rows(E, b);
    model.eq_matrix = std::move(E);
    model.eq_rhs = std::move(b);
    return model;
}

namespace {

LpModel build_projection_model(const Matrix& A, const Matrix& P, bool reflexive,
                               const Tolerances& tol) {
    const Index m = A.rows(), n = A.cols();
    LpModel model;
    model.kind = reflexive ? LpKind::P123 : LpKind::P13;
    model.m = m;
    model.n = n;
    model.r = numerical_rank(A, tol);
    model.vars = full_vars(n, m);
    const Index N = n * m;
    model.objective = Vector::Ones(N);

    const Index rows = reflexive ? m * m + n * m : m * m;
    Matrix E = Matrix::Zero(rows, N);
    Vector b = Vector::Zero(rows);
    // AH = P, entry (i,j): sum_k A_{ik} H_{kj}
    Index row = 0;
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < m; ++j, ++row) {
            for (Index k = 0; k < n; ++k) E(row, j * n + k) = A(i, k);
            b(row) = P(i, j);
        }
    if (reflexive) {
        // H(P - I) = 0, entry (i,j): sum_k H_{ik} (P - I)_{kj}
        const Matrix Q = P - Matrix::Identity(m, m);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j, ++row)
                for (Index k = 0; k < m; ++k) E(row, k * n + i) = Q(k, j);
    }
    reduce_rows(E, b);
    model.eq_matrix = std::move(E);
    model.eq_rhs = std::move(b);
    return model;
}

}  // namespace

LpModel build_p13(const Matrix& A, const Tolerances& tol) {
    require_finite(A, "build_p13");
    const Matrix P = A * pseudoinverse(A, tol);
    return build_projection_model(A, P, false, tol);
}

LpModel build_p123(const Matrix& A, const GinvResult& Hhat, const Tolerances& tol) {
    require_finite(A, "build_p123");
    const Matrix& Hh = Hhat.H;
    if (Hh.rows() != A.cols() || Hh.cols() != A.rows())
        throw ShapeMismatch("build_p123: linearizer has wrong shape");
    const double scale = tol.residual_tol * (1.0 + max_norm(A)) * (1.0 + max_norm(Hh));
    const Matrix AH = A * Hh;
    if (max_norm(AH * A - A) > scale || max_norm(Hh * AH - Hh) > scale ||
        max_norm(AH - AH.transpose()) > scale)
        throw InvalidLinearizer("build_p123: Hhat is not an ah-symmetric reflexive "
                                "generalized inverse of A");
    return build_projection_model(A, AH, true, tol);
}

namespace {

// Dense revised simplex over split variables x = x+ - x-. Split column j < N
// is +E_j, column j >= N is -E_{j-N}; artificial columns follow. Pricing is
// Dantzig with a Bland fallback while the objective stalls.
class Simplex {
public:
    Simplex(const LpModel& model, const SimplexOptions& opts)
        : E_(model.eq_matrix), opts_(opts), p_(model.eq_matrix.rows()),
          N_(model.eq_matrix.cols()) {
        b_ = model.eq_rhs;
        row_sign_ = Vector::Ones(p_);
        for (Index i = 0; i < p_; ++i)
            if (b_(i) < 0) {
                b_(i) = -b_(i);
                row_sign_(i) = -1.0;
            }
        cost_split_ = Vector(2 * N_);
        cost_split_ << model.objective, model.objective;
    }

    LpSolution run(const LpModel& model) {
        phase_ = 1;
        basis_.resize(static_cast<std::size_t>(p_));
        for (Index i = 0; i < p_; ++i) basis_[static_cast<std::size_t>(i)] = 2 * N_ + i;
        Binv_ = Matrix::Identity(p_, p_);
        xB_ = b_;

        iterate();  // phase 1: minimize sum of artificials
        const double infeas = artificial_level();
        if (infeas > 1e-7 * (1.0 + b_.lpNorm<Eigen::Infinity>()))
            throw NumericalBreakdown("simplex: phase 1 ended infeasible (residual " +
                                     std::to_string(infeas) + ")");
        drive_out_artificials();

        phase_ = 2;
        stall_ = 0;
        bland_ = false;
        iterate();

        LpSolution sol;
        Vector x = Vector::Zero(N_);
        double obj = 0.0;
        for (Index i = 0; i < p_; ++i) {
            const Index v = basis_[static_cast<std::size_t>(i)];
            if (v >= 2 * N_) continue;  // zero-level artificial left in basis
            const double value = xB_(i);
            obj += cost_split_(v) * value;
            x(v % N_) += v < N_ ? value : -value;
        }
        sol.H = assemble_H(model, x);
        sol.objective_value = obj;
        sol.basis = basis_;
        sol.is_vertex = true;
        sol.iterations = iterations_;
        return sol;
    }

private:
    double cost(Index var) const {
        if (phase_ == 1) return var >= 2 * N_ ? 1.0 : 0.0;
        return var >= 2 * N_ ? 0.0 : cost_split_(var);
    }

    double artificial_level() const {
        double level = 0.0;
        for (Index i = 0; i < p_; ++i)
            if (basis_[static_cast<std::size_t>(i)] >= 2 * N_) level += std::abs(xB_(i));
        return level;
    }

    // Column of the split system in the sign-flipped row space.
    Vector column(Index var) const {
        Vector a(p_);
        if (var >= 2 * N_) {
            a.setZero();
            a(var - 2 * N_) = 1.0;
            return a;
        }
        const Index j = var % N_;
        const double s = var < N_ ? 1.0 : -1.0;
        for (Index i = 0; i < p_; ++i) a(i) = s * row_sign_(i) * E_(i, j);
        return a;
    }

    void refactor() {
        Matrix B(p_, p_);
        for (Index i = 0; i < p_; ++i) B.col(i) = column(basis_[static_cast<std::size_t>(i)]);
        Eigen::PartialPivLU<Matrix> lu(B);
        const double scale = B.cwiseAbs().maxCoeff();
        for (Index i = 0; i < p_; ++i)
            if (std::abs(lu.matrixLU()(i, i)) < opts_.pivot_tol * (1.0 + scale))
                throw NumericalBreakdown("simplex: basis matrix is numerically singular");
        Binv_ = lu.solve(Matrix::Identity(p_, p_));
        Vector rhs = b_;
        xB_ = Binv_ * rhs;
    }

    void pivot(Index entering, Index leave_row, const Vector& w) {
        const double piv = w(leave_row);
        if (std::abs(piv) < opts_.pivot_tol)
            throw NumericalBreakdown("simplex: pivot element below tolerance");
        const double theta = xB_(leave_row) / piv;
        for (Index i = 0; i < p_; ++i)
            if (i != leave_row) xB_(i) -= theta * w(i);
        xB_(leave_row) = theta;
        Binv_.row(leave_row) /= piv;
        for (Index i = 0; i < p_; ++i) {
            if (i == leave_row) continue;
            const double f = w(i);
            if (f != 0.0) Binv_.row(i) -= f * Binv_.row(leave_row);
        }
        basis_[static_cast<std::size_t>(leave_row)] = entering;
        if (++updates_since_refactor_ >= 128) {
            refactor();
            updates_since_refactor_ = 0;
        }
    }

    void iterate() {
        std::vector<char> in_basis(static_cast<std::size_t>(2 * N_ + p_), 0);
        for (Index v : basis_) in_basis[static_cast<std::size_t>(v)] = 1;

        double last_obj = objective_now();
        while (true) {
            if (iterations_ >= opts_.max_iterations)
                throw IterationLimit("simplex: iteration limit reached");

            // reduced costs via y = Binv^T c_B, t = E^T y
            Vector cB(p_);
            for (Index i = 0; i < p_; ++i) cB(i) = cost(basis_[static_cast<std::size_t>(i)]);
            Vector y = Binv_.transpose() * cB;
            Vector ys = y.cwiseProduct(row_sign_);
            Vector t = E_.transpose() * ys;

            Index entering = -1;
            double best = -opts_.cost_tol;
            for (Index v = 0; v < 2 * N_; ++v) {  // artificials never re-enter
                if (in_basis[static_cast<std::size_t>(v)]) continue;
                const Index j = v % N_;
                const double d = cost(v) - (v < N_ ? t(j) : -t(j));
                if (d < best) {
                    entering = v;
                    best = d;
                    if (bland_) break;  // least-index rule
                }
            }
            if (entering < 0) break;  // optimal

            Vector w = Binv_ * column(entering);
            Index leave = -1;
            double best_ratio = 0.0;
            for (Index i = 0; i < p_; ++i) {
                if (w(i) <= 1e-9) continue;
                const double ratio = xB_(i) / w(i);
                if (leave < 0 || ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 &&
                     basis_[static_cast<std::size_t>(i)] <
                         basis_[static_cast<std::size_t>(leave)])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0)
                throw NumericalBreakdown("simplex: unbounded direction encountered");

            in_basis[static_cast<std::size_t>(basis_[static_cast<std::size_t>(leave)])] = 0;
            in_basis[static_cast<std::size_t>(entering)] = 1;
            pivot(entering, leave, w);
            ++iterations_;

            const double obj = objective_now();
            if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
                last_obj = obj;
                stall_ = 0;
                bland_ = false;
            } else if (!bland_ && ++stall_ > 5 * p_ + 50) {
                bland_ = true;  // anti-cycling until the next strict improvement
            }
        }
    }

    double objective_now() const {
        double obj = 0.0;
        for (Index i = 0; i < p_; ++i)
            obj += cost(basis_[static_cast<std::size_t>(i)]) * xB_(i);
        return obj;
    }

    void drive_out_artificials() {
        std::vector<char> in_basis(static_cast<std::size_t>(2 * N_ + p_), 0);
        for (Index v : basis_) in_basis[static_cast<std::size_t>(v)] = 1;
        for (Index i = 0; i < p_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < 2 * N_) continue;
            // degenerate pivot on the structural column with the largest
            // magnitude in this row of Binv * E; the row cannot vanish since
            // the reduced system has full row rank
            Vector row = (Binv_.row(i).cwiseProduct(row_sign_.transpose()) * E_).transpose();
            Index entering = -1;
            double best_mag = 1e-9;
            for (Index j = 0; j < N_; ++j) {
                const double mag = std::abs(row(j));
                if (mag <= best_mag) continue;
                if (!in_basis[static_cast<std::size_t>(j)]) {
                    entering = j;
                    best_mag = mag;
                } else if (!in_basis[static_cast<std::size_t>(j + N_)]) {
                    entering = j + N_;
                    best_mag = mag;
                }
            }
            if (entering < 0)
                throw NumericalBreakdown(
                    "simplex: cannot drive artificial out of a full-rank system");
            Vector w = Binv_ * column(entering);
            in_basis[static_cast<std::size_t>(basis_[static_cast<std::size_t>(i)])] = 0;
            in_basis[static_cast<std::size_t>(entering)] = 1;
            pivot(entering, i, w);
        }
    }

    const Matrix& E_;
    SimplexOptions opts_;
    Index p_, N_;
    Vector b_, row_sign_, cost_split_;
    std::vector<Index> basis_;
    Matrix Binv_;
    Vector xB_;
    int phase_ = 1;
    bool bland_ = false;
    Index stall_ = 0;
    Index iterations_ = 0;
    Index updates_since_refactor_ = 0;
};

}  // namespace

LpSolution simplex_solve(const LpModel& model, const SimplexOptions& opts) {
    if (model.eq_matrix.rows() != model.eq_rhs.size() ||
        model.eq_matrix.cols() != static_cast<Index>(model.vars.size()))
        throw ShapeMismatch("simplex_solve: inconsistent model");
    Simplex solver(model, opts);
    return solver.run(model);
}

std::pair<double, double> dual_feasibility(const Matrix& A, const Matrix& W,
                                           const std::optional<Matrix>& U,
                                           const Tolerances& tol) {
    if (W.rows() != A.rows() || W.cols() != A.cols())
        throw ShapeMismatch("dual_feasibility: W must have the shape of A");
    const double objective = (A.array() * W.array()).sum();
    Matrix G = A.transpose() * W * A.transpose();
    if (U) {
        if (U->rows() != A.rows() || U->cols() != A.rows())
            throw ShapeMismatch("dual_feasibility: U must be m x m");
        if (max_norm(*U + U->transpose()) > tol.residual_tol * (1.0 + max_norm(*U)))
            throw NotSkew("dual_feasibility: U is not skew-symmetric");
        G += A.transpose() * (*U);
    }
    return {objective, max_norm(G)};
}

std::string export_lp(const LpModel& model) {
    std::ostringstream os;
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    const Index N = static_cast<Index>(model.vars.size());
    os << "\\ " << to_string(model.kind) << " model: m=" << model.m << " n=" << model.n
       << " r=" << model.r << "\n";
    os << "Minimize\n obj:";
    for (Index v = 0; v < N; ++v)
        os << (v ? " + " : " ") << fmt(model.objective(v)) << " xp" << v << " + "
           << fmt(model.objective(v)) << " xn" << v;
    os << "\nSubject To\n";
    for (Index i = 0; i < model.eq_matrix.rows(); ++i) {
        os << " e" << i << ":";
        bool first = true;
        for (Index v = 0; v < N; ++v) {
            const double a = model.eq_matrix(i, v);
            if (a == 0.0) continue;
            os << (first ? " " : " + ") << fmt(a) << " xp" << v << " - " << fmt(a) << " xn"
               << v;
            first = false;
        }
        if (first) os << " 0 xp0";
        os << " = " << fmt(model.eq_rhs(i)) << "\n";
    }
    os << "Bounds\n";
    for (Index v = 0; v < N; ++v) os << " xp" << v << " >= 0\n xn" << v << " >= 0\n";
    os << "End\n";
    return os.str();
}

}  // namespace ginv

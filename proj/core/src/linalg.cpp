#include "ginv/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ginv {

IndexSet::IndexSet(std::vector<Index> indices, Index universe)
    : idx_(std::move(indices)), universe_(universe) {
    if (universe_ < 0) throw InvalidParams("IndexSet: negative universe");
    std::vector<bool> seen(static_cast<std::size_t>(universe_), false);
    for (Index v : idx_) {
        if (v < 0 || v >= universe_)
            throw InvalidParams("IndexSet: index " + std::to_string(v) +
                                " outside universe " + std::to_string(universe_));
        if (seen[static_cast<std::size_t>(v)])
            throw InvalidParams("IndexSet: duplicate index " + std::to_string(v));
        seen[static_cast<std::size_t>(v)] = true;
    }
}

IndexSet IndexSet::all(Index universe) {
    std::vector<Index> v(static_cast<std::size_t>(universe));
    for (Index i = 0; i < universe; ++i) v[static_cast<std::size_t>(i)] = i;
    return IndexSet(std::move(v), universe);
}

bool IndexSet::contains(Index v) const {
    return std::find(idx_.begin(), idx_.end(), v) != idx_.end();
}

IndexSet IndexSet::complement() const {
    std::vector<bool> in(static_cast<std::size_t>(universe_), false);
    for (Index v : idx_) in[static_cast<std::size_t>(v)] = true;
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(universe_ - size()));
    for (Index i = 0; i < universe_; ++i)
        if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
    return IndexSet(std::move(out), universe_);
}

IndexSet IndexSet::with_swapped(Index pos, Index v) const {
    std::vector<Index> out = idx_;
    out.at(static_cast<std::size_t>(pos)) = v;
    std::sort(out.begin(), out.end());
    return IndexSet(std::move(out), universe_);
}

std::string IndexSet::to_string() const {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < idx_.size(); ++i) {
        if (i) os << ',';
        os << idx_[i];
    }
    os << '}';
    return os.str();
}

void require_finite(const Matrix& A, const char* what) {
    if (!A.allFinite())
        throw InvalidParams(std::string(what) + ": non-finite entries");
}

Index numerical_rank(const Matrix& A, const Tolerances& tol) {
    if (A.size() == 0) throw InvalidParams("numerical_rank: empty matrix");
    Eigen::BDCSVD<Matrix> svd(A);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double cutoff = tol.rank_rel_tol * sv(0);
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(i) > 0.0) ++r;
    return r;
}

Matrix pseudoinverse(const Matrix& A, const Tolerances& tol) {
    if (A.size() == 0) throw InvalidParams("pseudoinverse: empty matrix");
    Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() ? tol.rank_rel_tol * sv(0) : 0.0;
    Vector inv_sv = Vector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(i) > 0.0) inv_sv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

namespace {

// Shared LU-with-partial-pivoting core: singularity when a pivot falls
// below 1e-14 * ||A||_max.
struct Lu {
    Eigen::PartialPivLU<Matrix> fac;
    bool singular;
    double det;
};

Lu lu_factor(const Matrix& A) {
    if (A.rows() != A.cols()) throw ShapeMismatch("LU: matrix not square");
    Lu lu{Eigen::PartialPivLU<Matrix>(A), false, 0.0};
    const double scale = max_norm(A);
    const double pivot_tol = 1e-14 * (scale > 0 ? scale : 1.0);
    double det = static_cast<double>(lu.fac.permutationP().determinant());
    for (Index i = 0; i < A.rows(); ++i) {
        const double piv = lu.fac.matrixLU()(i, i);
        if (std::abs(piv) < pivot_tol) lu.singular = true;
        det *= piv;
    }
    lu.det = det;
    return lu;
}

}  // namespace

Matrix solve(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows()) throw ShapeMismatch("solve: A and B row counts differ");
    Lu lu = lu_factor(A);
    if (lu.singular) throw SingularMatrix("solve: matrix is singular to working precision");
    return lu.fac.solve(B);
}

double determinant(const Matrix& A) {
    Lu lu = lu_factor(A);
    return lu.singular ? 0.0 : lu.det;
}

Matrix inverse(const Matrix& A) {
    Lu lu = lu_factor(A);
    if (lu.singular) throw SingularMatrix("inverse: matrix is singular to working precision");
    return lu.fac.solve(Matrix::Identity(A.rows(), A.cols()));
}

double one_norm(const Matrix& H) { return H.array().abs().sum(); }

double max_norm(const Matrix& H) {
    return H.size() == 0 ? 0.0 : H.array().abs().maxCoeff();
}

Index nnz(const Matrix& H, double tol) {
    return (H.array().abs() > tol).count();
}

Matrix submatrix(const Matrix& A, const IndexSet& rows, const IndexSet& cols) {
    if (rows.universe() != A.rows() || cols.universe() != A.cols())
        throw ShapeMismatch("submatrix: index universes do not match matrix shape");
    Matrix B(rows.size(), cols.size());
    for (Index i = 0; i < rows.size(); ++i)
        for (Index j = 0; j < cols.size(); ++j) B(i, j) = A(rows[i], cols[j]);
    return B;
}

Matrix rows_of(const Matrix& A, const IndexSet& rows) {
    return submatrix(A, rows, IndexSet::all(A.cols()));
}

Matrix cols_of(const Matrix& A, const IndexSet& cols) {
    return submatrix(A, IndexSet::all(A.rows()), cols);
}

bool is_symmetric(const Matrix& A, double tol) {
    if (A.rows() != A.cols()) return false;
    return (A - A.transpose()).array().abs().maxCoeff() <= tol;
}

}  // namespace ginv

#include "ginv/families.hpp"

#include "ginv/linalg.hpp"

#include <cmath>

namespace ginv {

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key,
                 std::optional<double> fallback = std::nullopt) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw InvalidParams("family parameter '" + key + "' is required");
}

}  // namespace

FamilyInstance sym_3x3() {
    FamilyInstance f;
    f.name = "sym_3x3";
    f.A = Matrix{{5, 4, 2}, {4, 5, -2}, {2, -2, 8}};
    f.known_H = f.A / 81.0;
    f.known_values = {{"opt_onenorm", 34.0 / 81.0},
                      {"block_norm_01", 2.0},
                      {"block_norm_02", 17.0 / 36.0},
                      {"block_norm_12", 17.0 / 36.0},
                      {"rank", 2.0}};
    return f;
}

FamilyInstance ah_3x3() {
    FamilyInstance f;
    f.name = "ah_3x3";
    f.A = Matrix{{1, 3, 8}, {2, 2, 8}, {3, 1, 8}};
    f.known_H = Matrix{{-0.25, 0.0, 0.25},
                       {0.25, 0.0, -0.25},
                       {1.0 / 24, 1.0 / 24, 1.0 / 24}};
    f.known_values = {{"opt_onenorm", 9.0 / 8.0},
                      {"block_norm_01", 7.0 / 6.0},
                      {"block_norm_02", 31.0 / 24.0},
                      {"block_norm_12", 31.0 / 24.0},
                      {"rank", 2.0}};
    return f;
}

Matrix uniform_plus_diag(Index n, double a, double b) {
    Matrix M = Matrix::Constant(n, n, b);
    M.diagonal().setConstant(a);
    return M;
}

FamilyInstance toeplitz_family(Index r, double delta_L, double delta_U, ToeplitzCase kind) {
    if (r < 3) throw InvalidParams("toeplitz_family: r must be at least 3");
    if (delta_L < 0 || delta_U < 0 || (delta_L == 0 && delta_U == 0))
        throw InvalidParams("toeplitz_family: need delta_L, delta_U >= 0, not both zero");
    if (kind == ToeplitzCase::Symmetric && delta_L != delta_U)
        throw InvalidParams("toeplitz_family: symmetric case requires delta_L == delta_U");

    Matrix seed_inv(r, r);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j)
            seed_inv(i, j) = i == j ? 1.0
                                    : (j > i ? 1.0 + static_cast<double>(j - i) * delta_U
                                             : 1.0 + static_cast<double>(i - j) * delta_L);
    Matrix seed = inverse(seed_inv);
    if (kind == ToeplitzCase::Symmetric) seed = ((seed + seed.transpose()) / 2.0).eval();
    const Vector b = seed * Vector::Ones(r);
    const Vector c = seed.transpose() * Vector::Ones(r);
    const double d = Vector::Ones(r).dot(seed * Vector::Ones(r));

    FamilyInstance f;
    f.params = {{"r", static_cast<double>(r)},
                {"delta_l", delta_L},
                {"delta_u", delta_U}};
    const double cubic = static_cast<double>(r * r * r - r);
    f.known_values["seed_inv_onenorm"] = r * r + cubic / 6.0 * (delta_L + delta_U);

    switch (kind) {
        case ToeplitzCase::Ah: {
            // A = [seed b 0; 0 0 0]
            f.name = "toeplitz_ah";
            Matrix A = Matrix::Zero(r + 1, r + 2);
            A.topLeftCorner(r, r) = seed;
            A.block(0, r, r, 1) = b;
            f.A = std::move(A);
            f.known_values["swap_block_onenorm"] = r + cubic / 6.0 * delta_L;
            f.known_values["ratio_limit"] = static_cast<double>(r);
            break;
        }
        case ToeplitzCase::General: {
            // A = [seed b 0; c^T d 0; 0 0 0]
            f.name = "toeplitz_general";
            Matrix A = Matrix::Zero(r + 2, r + 2);
            A.topLeftCorner(r, r) = seed;
            A.block(0, r, r, 1) = b;
            A.block(r, 0, 1, r) = c.transpose();
            A(r, r) = d;
            f.A = std::move(A);
            f.known_values["swap_block_onenorm"] = 1.0 + cubic / 3.0 * delta_L;
            f.known_values["ratio_limit"] = static_cast<double>(r * r);
            break;
        }
        case ToeplitzCase::Symmetric: {
            f.name = "toeplitz_symmetric";
            Matrix A = Matrix::Zero(r + 2, r + 2);
            A.topLeftCorner(r, r) = seed;
            A.block(0, r, r, 1) = b;
            A.block(r, 0, 1, r) = b.transpose();
            A(r, r) = d;
            f.A = std::move(A);
            f.known_values["swap_block_onenorm"] = 1.0 + cubic / 3.0 * (delta_L + delta_U);
            f.known_values["ratio_limit"] = static_cast<double>(r * r);
            break;
        }
    }
    return f;
}

FamilyInstance no_const_rank2(double k) {
    if (k <= 0) throw InvalidParams("no_const_rank2: k must be positive");
    FamilyInstance f;
    f.name = "no_const_rank2";
    f.A = Matrix{{1, 0, k, k}, {0, 1, k, -k}};
    f.params = {{"k", k}};
    f.known_values = {{"local_min_onenorm", 2.0},
                      {"neighbor_onenorm", 2.0 + 1.0 / k},
                      {"escape_onenorm", 2.0 / k}};
    return f;
}

FamilyInstance no_const_general(Index r, double k) {
    if (r < 3) throw InvalidParams("no_const_general: r must be at least 3");
    if (k <= 0) throw InvalidParams("no_const_general: k must be positive");
    FamilyInstance f;
    f.name = "no_const_general";
    Matrix A(r, 2 * r);
    A.leftCols(r) = Matrix::Identity(r, r);
    A.rightCols(r) = k * uniform_plus_diag(r, -1.0, 1.0);
    f.A = std::move(A);
    f.params = {{"r", static_cast<double>(r)}, {"k", k}};
    f.known_values = {{"local_min_onenorm", static_cast<double>(r)},
                      {"neighbor_onenorm", 2.0 * (r - 1) + 1.0 / k},
                      {"escape_onenorm", static_cast<double>(r) / k}};
    return f;
}

FamilyInstance tight_ratio_r_plus_1(Index r) {
    if (r < 2) throw InvalidParams("tight_ratio_r_plus_1: r must be at least 2");
    FamilyInstance f;
    f.name = "tight_ratio";
    const Matrix Ahat = inverse(uniform_plus_diag(r, 1.0 + r, 1.0));
    Matrix A(r, r + 1);
    A.leftCols(r) = Ahat;
    A.col(r) = Ahat * Vector::Ones(r);
    f.A = std::move(A);
    f.params = {{"r", static_cast<double>(r)}};
    f.known_values = {{"expected_ratio", 2.0 * r / (r + 1.0)},
                      {"block_onenorm", 2.0 * r * r},
                      {"opt_onenorm", static_cast<double>(r * (r + 1))}};
    return f;
}

FamilyInstance p1sym_sharp(Index r) {
    if (r < 3) throw InvalidParams("p1sym_sharp: r must be at least 3");
    const double rd = static_cast<double>(r);

    Matrix X(r, 2);
    X(0, 0) = rd / (2.0 * (rd - 1.0));
    X(0, 1) = -rd * (rd - 2.0) / (2.0 * (rd - 1.0) * (rd - 1.0));
    for (Index i = 1; i < r; ++i) {
        X(i, 0) = 1.0 / (2.0 * (rd - 1.0));
        X(i, 1) = rd / (2.0 * (rd - 1.0) * (rd - 1.0));
    }
    Matrix Y = Matrix::Zero(r, 2);
    Y(0, 1) = -1.0;
    for (Index i = 1; i < r; ++i) Y(i, 0) = -1.0;

    const Matrix H0 = Matrix::Identity(r, r) - Matrix::Ones(r, r);
    Matrix D = Matrix::Zero(r, r);
    D(0, 0) = (rd - 1.0) / rd;

    const Matrix A0 = inverse(H0 + X * Y.transpose() + Y * X.transpose());
    Matrix lift(r + 2, r);
    lift.topRows(r) = Matrix::Identity(r, r);
    lift.bottomRows(2) = X.transpose();

    FamilyInstance f;
    f.name = "p1sym_sharp";
    f.A = lift * A0 * lift.transpose();
    Matrix H = Matrix::Zero(r + 2, r + 2);
    H.topLeftCorner(r, r) = H0;
    H.block(0, r, r, 2) = Y;
    H.block(r, 0, 2, r) = Y.transpose();
    f.known_H = std::move(H);
    const Matrix A0_inv = H0 + X * Y.transpose() + Y * X.transpose();
    Matrix W = Matrix::Zero(r + 2, r + 2);
    W.topLeftCorner(r, r) = A0_inv * (H0 + D) * A0_inv;
    f.known_W = std::move(W);
    f.params = {{"r", rd}};
    f.known_values = {{"opt_onenorm", rd * rd + rd},
                      {"nnz_expected", rd * rd + rd},
                      {"rank", rd}};
    return f;
}

FamilyInstance p123_sharp(Index m, Index r) {
    if (r < 2) throw InvalidParams("p123_sharp: r must be at least 2");
    if (m <= r) throw InvalidParams("p123_sharp: need m > r");
    const double md = static_cast<double>(m);
    const double hi = (md + r) / (2.0 * md);
    const double lo = (md - r + 1.0) / (2.0 * md);
    const Index y_cols = r * r - r;

    // Columns of Y enumerate ordered pairs (i, j), i != j, lexicographically:
    // value hi at i, lo at j.
    Matrix Y = Matrix::Zero(r, y_cols);
    Matrix H1 = Matrix::Zero(y_cols, r);
    Matrix D1 = Matrix::Constant(y_cols, r, (md - r) / (2.0 * md));
    Index col = 0;
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < r; ++j) {
            if (i == j) continue;
            Y(i, col) = hi;
            Y(j, col) = lo;
            H1(col, i) = 1.0;
            D1(col, i) = 0.0;
            D1(col, j) = (2.0 * md - 2.0 * r + 1.0) / (2.0 * md);
            ++col;
        }

    const Matrix X = Matrix::Ones(r, m - r);
    const Matrix H0 = Matrix::Identity(r, r);
    const Matrix IXXt = Matrix::Identity(r, r) + X * X.transpose();
    const Matrix A0 = inverse((H0 + Y * H1) * IXXt);

    Matrix lift(m, r);
    lift.topRows(r) = Matrix::Identity(r, r);
    lift.bottomRows(m - r) = X.transpose();
    Matrix wide(r, r + y_cols);
    wide.leftCols(r) = Matrix::Identity(r, r);
    wide.rightCols(y_cols) = Y;

    FamilyInstance f;
    f.name = "p123_sharp";
    f.A = lift * A0 * wide;  // m x r^2

    Matrix H(r + y_cols, m);
    H.topLeftCorner(r, r) = H0;
    H.block(0, r, r, m - r) = Matrix::Ones(r, m - r);
    H.block(r, 0, y_cols, r) = H1;
    H.block(r, r, y_cols, m - r) = Matrix::Ones(y_cols, m - r);
    f.known_H = std::move(H);

    const Matrix A0_inv = (H0 + Y * H1) * IXXt;
    const Matrix W0 =
        (H0 + Matrix::Ones(r, m - r) * X.transpose()) * inverse(IXXt);  // sign(H0) = H0
    Matrix W = Matrix::Zero(m, r + y_cols);
    W.topLeftCorner(r, r) = A0_inv.transpose() * W0 * A0_inv.transpose();
    f.known_W = std::move(W);

    Matrix V(r + y_cols, m);
    V.topLeftCorner(r, r) = H0;
    V.block(0, r, r, m - r) = Matrix::Ones(r, m - r);
    V.block(r, 0, y_cols, r) = H1 + D1;
    V.block(r, r, y_cols, m - r) = Matrix::Ones(y_cols, m - r);
    f.known_V = std::move(V);

    f.params = {{"m", md}, {"r", static_cast<double>(r)}};
    const double nnz_expected = static_cast<double>(r * r + r * r * (m - r));
    f.known_values = {{"opt_onenorm", nnz_expected},
                      {"nnz_expected", nnz_expected},
                      {"rank", static_cast<double>(r)}};
    return f;
}

Matrix sym_embedding(const Matrix& A) {
    const Index m = A.rows(), n = A.cols();
    Matrix bar = Matrix::Zero(m + n, m + n);
    bar.topRightCorner(m, n) = A;
    bar.bottomLeftCorner(n, m) = A.transpose();
    return bar;
}

FamilyInstance make_family(const std::string& name,
                           const std::map<std::string, double>& params) {
    auto r_of = [&](double fallback = -1) {
        return static_cast<Index>(fallback < 0 ? get_param(params, "r")
                                               : get_param(params, "r", fallback));
    };
    if (name == "sym_3x3") return sym_3x3();
    if (name == "ah_3x3") return ah_3x3();
    if (name == "toeplitz_general" || name == "toeplitz_symmetric" || name == "toeplitz_ah") {
        const ToeplitzCase kind = name == "toeplitz_general" ? ToeplitzCase::General
                                  : name == "toeplitz_symmetric" ? ToeplitzCase::Symmetric
                                                                 : ToeplitzCase::Ah;
        double dl = get_param(params, "delta_l", 1e-3);
        double du = get_param(params, "delta_u",
                              kind == ToeplitzCase::Symmetric ? dl : 0.0);
        return toeplitz_family(r_of(4), dl, du, kind);
    }
    if (name == "no_const_rank2") return no_const_rank2(get_param(params, "k", 10.0));
    if (name == "no_const_general")
        return no_const_general(r_of(3), get_param(params, "k", 10.0));
    if (name == "tight_ratio") return tight_ratio_r_plus_1(r_of(3));
    if (name == "p1sym_sharp") return p1sym_sharp(r_of(3));
    if (name == "p123_sharp")
        return p123_sharp(static_cast<Index>(get_param(params, "m")), r_of(2));
    throw InvalidParams("unknown family '" + name + "'");
}

}  // namespace ginv

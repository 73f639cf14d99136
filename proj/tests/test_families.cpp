#include <ginv/blocks.hpp>
#include <ginv/families.hpp>
#include <ginv/linalg.hpp>
#include <ginv/search.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace ginv;

TEST_CASE("sym_3x3 matches its closed forms") {
    const FamilyInstance f = sym_3x3();
    CHECK((f.A * f.A - 9 * f.A).cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_norm(*f.known_H - pseudoinverse(f.A)) < 1e-12);
    CHECK(one_norm(*f.known_H) == doctest::Approx(f.known_values.at("opt_onenorm")));

    CHECK(symmetric_block(f.A, IndexSet({0, 1}, 3)).one_norm ==
          doctest::Approx(f.known_values.at("block_norm_01")).epsilon(1e-12));
    CHECK(symmetric_block(f.A, IndexSet({0, 2}, 3)).one_norm ==
          doctest::Approx(f.known_values.at("block_norm_02")).epsilon(1e-12));
    CHECK(symmetric_block(f.A, IndexSet({1, 2}, 3)).one_norm ==
          doctest::Approx(f.known_values.at("block_norm_12")).epsilon(1e-12));
}

TEST_CASE("ah_3x3 matches its closed forms") {
    const FamilyInstance f = ah_3x3();
    const Matrix& A = f.A;
    const Matrix& H = *f.known_H;
    CHECK(max_norm(A * H * A - A) < 1e-12);
    CHECK(max_norm(H * A * H - H) < 1e-12);
    CHECK(max_norm(A * H - (A * H).transpose()) < 1e-12);
    CHECK(one_norm(H) == doctest::Approx(9.0 / 8).epsilon(1e-12));

    std::vector<double> norms = {column_block(A, IndexSet({0, 1}, 3)).one_norm,
                                 column_block(A, IndexSet({0, 2}, 3)).one_norm,
                                 column_block(A, IndexSet({1, 2}, 3)).one_norm};
    std::sort(norms.begin(), norms.end());
    CHECK(norms[0] == doctest::Approx(f.known_values.at("block_norm_01")).epsilon(1e-12));
    CHECK(norms[1] == doctest::Approx(f.known_values.at("block_norm_02")).epsilon(1e-12));
}

TEST_CASE("toeplitz closed forms across r and both deltas") {
    for (Index r : {3, 4, 5}) {
        const double dl = 1e-3, du = 2e-3;
        const FamilyInstance gen = toeplitz_family(r, dl, du, ToeplitzCase::General);
        // seed block inverse reproduces the Toeplitz matrix and its 1-norm
        const Matrix seed = gen.A.topLeftCorner(r, r);
        const Matrix seed_inv = inverse(seed);
        CHECK(one_norm(seed_inv) ==
              doctest::Approx(gen.known_values.at("seed_inv_onenorm")).epsilon(1e-8));
        CHECK(numerical_rank(seed_inv) == r);

        // Sherman-Morrison consistency: replacing column 1 by b = seed * 1
        // subtracts (1 - e1) e1^T seed_inv from the inverse
        Matrix swapped = seed;
        swapped.col(0) = seed * Vector::Ones(r);
        Vector e1 = Vector::Zero(r);
        e1(0) = 1.0;
        const Matrix expected =
            seed_inv - (Vector::Ones(r) - e1) * (e1.transpose() * seed_inv);
        CHECK(max_norm(inverse(swapped) - expected) < 1e-10);

        // ah case swap norm: delta_U = 0
        const FamilyInstance ah = toeplitz_family(r, dl, 0.0, ToeplitzCase::Ah);
        Matrix ah_seed = ah.A.topLeftCorner(r, r);
        Matrix ah_swapped = ah_seed;
        ah_swapped.col(0) = ah.A.col(r);  // b
        CHECK(one_norm(inverse(ah_swapped)) ==
              doctest::Approx(ah.known_values.at("swap_block_onenorm")).epsilon(1e-8));

        // symmetric case swap norm: both row and column replaced
        const FamilyInstance sym = toeplitz_family(r, dl, dl, ToeplitzCase::Symmetric);
        CHECK(is_symmetric(sym.A, 1e-12));
        IndexSet alt(std::vector<Index>{}, sym.A.rows());
        {
            std::vector<Index> idx;
            for (Index i = 1; i <= r; ++i) idx.push_back(i);
            alt = IndexSet(idx, sym.A.rows());
        }
        CHECK(one_norm(inverse(submatrix(sym.A, alt, alt))) ==
              doctest::Approx(sym.known_values.at("swap_block_onenorm")).epsilon(1e-8));
    }

    CHECK_THROWS_AS(toeplitz_family(4, 0.0, 0.0, ToeplitzCase::General), InvalidParams);
    CHECK_THROWS_AS(toeplitz_family(4, 1e-3, 2e-3, ToeplitzCase::Symmetric), InvalidParams);
    CHECK_THROWS_AS(toeplitz_family(2, 1e-3, 0.0, ToeplitzCase::Ah), InvalidParams);
}

TEST_CASE("no_const families") {
    const FamilyInstance r2 = no_const_rank2(10.0);
    CHECK(one_norm(inverse(r2.A.leftCols(2))) ==
          doctest::Approx(r2.known_values.at("local_min_onenorm")).epsilon(1e-12));
    CHECK(one_norm(inverse(r2.A.rightCols(2))) ==
          doctest::Approx(r2.known_values.at("escape_onenorm")).epsilon(1e-12));

    for (Index r : {3, 4, 5}) {
        const double k = 5.0;
        const FamilyInstance f = no_const_general(r, k);
        CHECK(one_norm(inverse(f.A.rightCols(r))) ==
              doctest::Approx(f.known_values.at("escape_onenorm")).epsilon(1e-10));
        // det of the unscaled uniform-plus-diagonal factor
        const double expect_det =
            std::pow(-2.0, double(r - 1)) * static_cast<double>(r - 2);
        CHECK(determinant(uniform_plus_diag(r, -1.0, 1.0)) ==
              doctest::Approx(expect_det).epsilon(1e-10));
        // every single-column swap from the identity block costs 2(r-1) + 1/k
        const IndexSet all_rows = IndexSet::all(r);
        std::vector<Index> first;
        for (Index i = 0; i < r; ++i) first.push_back(i);
        const IndexSet T0(first, 2 * r);
        for (Index out = 0; out < r; ++out)
            for (Index in = r; in < 2 * r; ++in) {
                IndexSet T = T0.with_swapped(out, in);
                const double norm = one_norm(inverse(submatrix(f.A, all_rows, T)));
                CHECK(norm ==
                      doctest::Approx(f.known_values.at("neighbor_onenorm")).epsilon(1e-10));
            }
    }
}

TEST_CASE("tight_ratio family") {
    for (Index r : {2, 3, 4}) {
        const FamilyInstance f = tight_ratio_r_plus_1(r);
        CHECK(f.A.rows() == r);
        CHECK(f.A.cols() == r + 1);
        CHECK(f.known_values.at("expected_ratio") ==
              doctest::Approx(2.0 * r / (r + 1.0)));
        // Ahat = (J + rI)^{-1} is symmetric positive definite
        const Matrix Ahat = f.A.leftCols(r);
        CHECK(is_symmetric(Ahat, 1e-12));
        Eigen::LLT<Matrix> llt(Ahat);
        CHECK(llt.info() == Eigen::Success);
        // every r x r block of A has inverse 1-norm 2 r^2
        for (Index drop = 0; drop <= r; ++drop) {
            std::vector<Index> keep;
            for (Index j = 0; j <= r; ++j)
                if (j != drop) keep.push_back(j);
            const Matrix block = submatrix(f.A, IndexSet::all(r), IndexSet(keep, r + 1));
            CHECK(one_norm(inverse(block)) ==
                  doctest::Approx(f.known_values.at("block_onenorm")).epsilon(1e-9));
        }
    }
}

TEST_CASE("p1sym_sharp identities") {
    for (Index r : {3, 4, 5}) {
        const FamilyInstance f = p1sym_sharp(r);
        const Matrix& A = f.A;
        const Matrix& H = *f.known_H;
        const Matrix& W = *f.known_W;
        CHECK(A.rows() == r + 2);
        CHECK(is_symmetric(A, 1e-9));
        CHECK(numerical_rank(A) == r);
        CHECK(max_norm(A * H * A - A) < 1e-8);
        CHECK(one_norm(H) == doctest::Approx(double(r * r + r)).epsilon(1e-9));
        CHECK(nnz(H, 1e-6) == r * r + r);
        CHECK(max_norm(A * W * A) <= 1.0 + 1e-9);
        CHECK((A.array() * W.array()).sum() ==
              doctest::Approx(double(r * r + r)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(p1sym_sharp(2), InvalidParams);
}

TEST_CASE("p123_sharp identities") {
    for (auto [m, r] : {std::pair<Index, Index>{3, 2}, {4, 2}, {5, 3}, {6, 3}}) {
        const FamilyInstance f = p123_sharp(m, r);
        const Matrix& A = f.A;
        const Matrix& H = *f.known_H;
        CHECK(A.rows() == m);
        CHECK(A.cols() == r * r);
        CHECK(numerical_rank(A) == r);
        CHECK(max_norm(A * H * A - A) < 1e-8);
        const Matrix proj = Matrix::Identity(m, m) - A * pseudoinverse(A);
        CHECK(max_norm(H * proj) < 1e-8);
        CHECK(nnz(H, 1e-6) == r * r + r * r * (m - r));

        // dual identity A^T W A^T + V(I - AA+) = sign(H) + D with ||D|| < 1
        const Matrix lhs = A.transpose() * *f.known_W * A.transpose() + *f.known_V * proj;
        Matrix signH = H.unaryExpr([](double v) {
            return std::abs(v) <= 1e-12 ? 0.0 : (v > 0 ? 1.0 : -1.0);
        });
        const Matrix D = lhs - signH;
        CHECK(max_norm(*f.known_V - (signH + D)) < 1e-8);
        CHECK(max_norm(D) < 1.0 - 1e-6);
        CHECK((A.array() * f.known_W->array()).sum() ==
              doctest::Approx(one_norm(H)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(p123_sharp(2, 2), InvalidParams);
}

TEST_CASE("sym_embedding") {
    const Matrix bar_id = sym_embedding(Matrix::Identity(2, 2));
    CHECK(numerical_rank(bar_id) == 4);
    CHECK(max_norm(bar_id - bar_id.transpose()) == 0.0);

    std::mt19937 rng(29);
    const Matrix A = oracle::random_rank_matrix(rng, 3, 4, 2);
    const Matrix bar = sym_embedding(A);
    CHECK(is_symmetric(bar, 0.0));
    const GinvResult res = sym_reflexive_ginv(bar, SearchConfig{});
    // the off-diagonal block of any symmetric generalized inverse of the
    // embedding is a generalized inverse of A
    const Matrix Z = res.H.block(3, 0, 4, 3);
    CHECK(max_norm(A * Z * A - A) < 1e-8 * (1.0 + max_norm(A)));
}

TEST_CASE("family registry") {
    CHECK(make_family("sym_3x3", {}).A.rows() == 3);
    CHECK(make_family("toeplitz_ah", {{"r", 4}, {"delta_l", 1e-3}}).A.rows() == 5);
    CHECK(make_family("no_const_rank2", {{"k", 100}}).params.at("k") == 100.0);
    CHECK(make_family("p123_sharp", {{"m", 3}, {"r", 2}}).A.cols() == 4);
    CHECK_THROWS_AS(make_family("nope", {}), InvalidParams);
}

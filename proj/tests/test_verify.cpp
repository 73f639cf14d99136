#include <ginv/families.hpp>
#include <ginv/linalg.hpp>
#include <ginv/lp.hpp>
#include <ginv/search.hpp>
#include <ginv/verify.hpp>

#include <doctest.h>

#include "oracles.hpp"

#include <random>

using namespace ginv;

namespace {

const Matrix kSym = Matrix{{5, 4, 2}, {4, 5, -2}, {2, -2, 8}};
const Matrix kAh = Matrix{{1, 3, 8}, {2, 2, 8}, {3, 1, 8}};

}  // namespace

TEST_CASE("check_properties") {
    std::mt19937 rng(7);
    const Matrix A = oracle::random_rank_matrix(rng, 5, 4, 2);
    const PropertyReport pinv_rep = check_properties(A, pseudoinverse(A));
    CHECK(pinv_rep.residual_p1 < 1e-8);
    CHECK(pinv_rep.residual_p2 < 1e-8);
    CHECK(pinv_rep.residual_p3 < 1e-8);
    CHECK(pinv_rep.residual_p4 < 1e-8);
    CHECK(pinv_rep.reflexive);

    const PropertyReport sym_rep = check_properties(kSym, Matrix(kSym / 81.0));
    CHECK(sym_rep.residual_p1 < 1e-12);
    CHECK(sym_rep.residual_p2 < 1e-12);
    CHECK(sym_rep.residual_p3 < 1e-12);
    CHECK(sym_rep.residual_p4 < 1e-12);
    CHECK(sym_rep.reflexive);
    CHECK(sym_rep.rank_A == 2);

    // the zero matrix satisfies everything except P1
    const PropertyReport zero_rep = check_properties(kSym, Matrix::Zero(3, 3));
    CHECK(zero_rep.residual_p1 > 1.0);
    CHECK(zero_rep.residual_p2 == 0.0);
    CHECK(zero_rep.residual_p3 == 0.0);
    CHECK(zero_rep.residual_p4 == 0.0);
    CHECK(!zero_rep.reflexive);

    CHECK_THROWS_AS(check_properties(kSym, Matrix::Zero(2, 3)), ShapeMismatch);
}

TEST_CASE("least_squares_check") {
    Vector b(3);
    b << 1, 2, 3;
    CHECK(least_squares_check(Matrix::Identity(3, 3), Matrix::Identity(3, 3), b) == 0.0);

    const FamilyInstance fam = ah_3x3();
    Vector e1(3);
    e1 << 1, 0, 0;
    CHECK(least_squares_check(fam.A, *fam.known_H, e1) < 1e-10);
    // x = Hb reaches the same fitted values as the pseudoinverse route
    const Vector via_h = fam.A * (*fam.known_H * e1);
    const Vector via_pinv = fam.A * (pseudoinverse(fam.A) * e1);
    CHECK((via_h - via_pinv).cwiseAbs().maxCoeff() < 1e-10);

    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix A = oracle::random_rank_matrix(rng, 6, 4, 3);
        auto [S, T] = init_general(A);
        const GinvResult res = column_block(A, T);
        Vector rb(6);
        std::uniform_real_distribution<double> dist(-2, 2);
        for (Index i = 0; i < 6; ++i) rb(i) = dist(rng);
        CHECK(least_squares_check(A, res.H, rb) < 1e-8 * (1.0 + max_norm(A)));
    }
}

TEST_CASE("sym_certificate") {
    const Certificate cert = sym_certificate(kSym, IndexSet({0, 2}, 3));
    CHECK(cert.dual_objective == doctest::Approx(17.0 / 36).epsilon(1e-12));

    const Certificate id_cert = sym_certificate(Matrix::Identity(3, 3), IndexSet::all(3));
    CHECK(max_norm(id_cert.W - Matrix::Identity(3, 3)) < 1e-14);
    CHECK(id_cert.feasibility_scale == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id_cert.implied_lower_bound == doctest::Approx(3.0).epsilon(1e-12));

    CHECK_THROWS_AS(sym_certificate(kAh, IndexSet({0, 1}, 3)), NotSymmetric);

    // at an eps=0 local maximizer the feasibility scale obeys r^2 (1+eps)
    std::mt19937 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix A = oracle::random_symmetric_rank(rng, 7, 3);
        const GinvResult res = sym_reflexive_ginv(A, SearchConfig{});
        const Certificate c = sym_certificate(A, res.S);
        CHECK(c.feasibility_scale <= 9.0 * (1.0 + 1e-9));
        CHECK(c.dual_objective == doctest::Approx(res.one_norm).epsilon(1e-9));

        // north-west block of AWA carries the sign pattern of the block
        // inverse with magnitudes at most 1
        const Matrix AWA = A * c.W * A;
        const Matrix binv = inverse(submatrix(A, res.S, res.S));
        for (Index i = 0; i < res.S.size(); ++i)
            for (Index j = 0; j < res.S.size(); ++j) {
                const double v = AWA(res.S[i], res.S[j]);
                CHECK(std::abs(v) <= 1.0 + 1e-9);
                if (std::abs(binv(i, j)) > 1e-9)
                    CHECK(v * binv(i, j) > 0.0);  // matching sign
            }
    }
}

TEST_CASE("ah_certificate") {
    const Certificate id_cert =
        ah_certificate(Matrix::Identity(2, 2), IndexSet::all(2), IndexSet::all(2));
    CHECK(max_norm(id_cert.W - Matrix::Identity(2, 2)) < 1e-12);
    REQUIRE(id_cert.U.has_value());
    CHECK(max_norm(*id_cert.U) < 1e-12);
    CHECK(id_cert.feasibility_scale == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix A = oracle::random_rank_matrix(rng, 5, 7, 3);
        auto [S, T] = init_general(A);
        const Certificate cert = ah_certificate(A, S, T);
        REQUIRE(cert.U.has_value());

        // U is skew to machine precision
        CHECK(max_norm(*cert.U + cert.U->transpose()) == 0.0);

        // Ahat^T W A^T + Ahat^T U = sign(Ahat^+), rebuilt from scratch
        const Matrix Ahat = cols_of(A, T);
        const Matrix Ahat_pinv =
            solve(Ahat.transpose() * Ahat, Matrix(Ahat.transpose()));
        Matrix E(T.size(), A.rows());
        for (Index i = 0; i < E.rows(); ++i)
            for (Index j = 0; j < E.cols(); ++j) {
                const double v = Ahat_pinv(i, j);
                E(i, j) = std::abs(v) <= 1e-12 ? 0.0 : (v > 0 ? 1.0 : -1.0);
            }
        const Matrix lhs =
            Ahat.transpose() * cert.W * A.transpose() + Ahat.transpose() * *cert.U;
        CHECK(max_norm(lhs - E) < 1e-8);

        // <A, W> = ||Ahat^+||_1
        CHECK((A.array() * cert.W.array()).sum() ==
              doctest::Approx(one_norm(Ahat_pinv)).epsilon(1e-8));

        // the factored feasibility scale agrees with the direct formula
        const auto [obj, scale] = dual_feasibility(A, cert.W, cert.U);
        CHECK(obj == doctest::Approx(cert.dual_objective).epsilon(1e-9));
        CHECK(scale == doctest::Approx(cert.feasibility_scale).epsilon(1e-9));
    }

    // at an eps=0 local maximizer the scale obeys r (1+eps)
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix A = oracle::random_rank_matrix(rng, 6, 9, 3);
        const GinvResult res = ah_symmetric_ginv(A, SearchConfig{});
        const Certificate cert = ah_certificate(A, res.S, res.T);
        CHECK(cert.feasibility_scale <= 3.0 * (1.0 + 1e-9));
        CHECK(cert.dual_objective == doctest::Approx(res.one_norm).epsilon(1e-9));
    }
}

TEST_CASE("certified_ratio") {
    std::mt19937 rng(19);
    for (int trial = 0; trial < 8; ++trial) {
        const Matrix A = oracle::random_symmetric_rank(rng, 8, 3);
        const GinvResult res = sym_reflexive_ginv(A, SearchConfig{});
        const Certificate cert = sym_certificate(A, res.S);
        const double ratio = certified_ratio(A, res, cert);
        CHECK(ratio <= 9.0 + 1e-9);
        CHECK(ratio >= 1.0 - 1e-9);
    }
    for (int trial = 0; trial < 8; ++trial) {
        const Matrix A = oracle::random_rank_matrix(rng, 8, 12, 3);
        const GinvResult res = ah_symmetric_ginv(A, SearchConfig{});
        const Certificate cert = ah_certificate(A, res.S, res.T);
        const double ratio = certified_ratio(A, res, cert);
        CHECK(ratio <= 3.0 + 1e-9);
        CHECK(ratio >= 1.0 - 1e-9);
    }

    const Matrix I3 = Matrix::Identity(3, 3);
    const GinvResult res = sym_reflexive_ginv(I3, SearchConfig{});
    const Certificate cert = sym_certificate(I3, res.S);
    CHECK(certified_ratio(I3, res, cert) == doctest::Approx(1.0).epsilon(1e-12));

    Certificate degenerate = cert;
    degenerate.dual_objective = 0.0;
    CHECK_THROWS_AS(certified_ratio(I3, res, degenerate), DegenerateCertificate);
}

TEST_CASE("certificate bound never exceeds the LP optimum") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix A = oracle::random_symmetric_rank(rng, 5, 2);
        const GinvResult res = sym_reflexive_ginv(A, SearchConfig{});
        const Certificate cert = sym_certificate(A, res.S);
        const double opt = simplex_solve(build_p1(A)).objective_value;
        CHECK(cert.implied_lower_bound <= opt + 1e-8);
    }
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix A = oracle::random_rank_matrix(rng, 5, 4, 2);
        const GinvResult res = ah_symmetric_ginv(A, SearchConfig{});
        const Certificate cert = ah_certificate(A, res.S, res.T);
        const double opt = simplex_solve(build_p13(A)).objective_value;
        CHECK(cert.implied_lower_bound <= opt + 1e-8);
    }
}

TEST_CASE("reports serialize to json") {
    const PropertyReport rep = check_properties(kSym, Matrix(kSym / 81.0));
    nlohmann::json j = rep;
    CHECK(j["reflexive"].get<bool>());
    CHECK(j["rank_A"].get<int>() == 2);

    const Certificate cert = sym_certificate(kSym, IndexSet({0, 2}, 3));
    nlohmann::json cj = cert;
    CHECK(cj["dual_objective"].get<double>() == doctest::Approx(17.0 / 36));
    CHECK(cj.contains("implied_lower_bound"));
}

#include <ginv/io.hpp>
#include <ginv/linalg.hpp>

#include <doctest.h>

#include <random>
#include <sstream>

using namespace ginv;

TEST_CASE("round trip through every format") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> dist(-10, 10);
    for (MatrixFormat fmt :
         {MatrixFormat::MatrixMarket, MatrixFormat::Csv, MatrixFormat::Json}) {
        for (int trial = 0; trial < 5; ++trial) {
            Matrix A(3 + trial, 2 + trial);
            for (Index i = 0; i < A.rows(); ++i)
                for (Index j = 0; j < A.cols(); ++j) A(i, j) = dist(rng);
            std::stringstream buf;
            write_matrix(buf, A, fmt);
            const Matrix B = read_matrix(buf, fmt);
            CHECK(B.rows() == A.rows());
            CHECK(B.cols() == A.cols());
            CHECK(max_norm(A - B) == 0.0);  // 17 significant digits are lossless
        }
    }
}

TEST_CASE("matrix market coordinate input") {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real general\n"
        "% comment line\n"
        "3 4 3\n"
        "1 1 2.5\n"
        "3 4 -1\n"
        "2 2 7\n");
    const Matrix A = read_matrix(in, MatrixFormat::MatrixMarket);
    CHECK(A.rows() == 3);
    CHECK(A.cols() == 4);
    CHECK(A(0, 0) == 2.5);
    CHECK(A(2, 3) == -1.0);
    CHECK(A(1, 1) == 7.0);
    CHECK(nnz(A, 0.0) == 3);
}

TEST_CASE("matrix market symmetric coordinate mirrors entries") {
    std::istringstream in(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 2\n"
        "1 1 3\n"
        "2 1 5\n");
    const Matrix A = read_matrix(in, MatrixFormat::MatrixMarket);
    CHECK(A(0, 1) == 5.0);
    CHECK(A(1, 0) == 5.0);
    CHECK(A(0, 0) == 3.0);
}

TEST_CASE("csv rejects ragged rows") {
    std::istringstream in("1,2,3\n4,5\n");
    CHECK_THROWS_AS(read_matrix(in, MatrixFormat::Csv), IoError);
}

TEST_CASE("json shape validation") {
    std::istringstream in(R"({"rows": 2, "cols": 2, "entries": [1, 2, 3]})");
    CHECK_THROWS_AS(read_matrix(in, MatrixFormat::Json), IoError);
}

TEST_CASE("non-finite entries rejected") {
    std::istringstream in("1,2\n3,nan\n");
    CHECK_THROWS_AS(read_matrix(in, MatrixFormat::Csv), InvalidParams);
}

TEST_CASE("format from path") {
    CHECK(format_from_path("a/b/c.mtx") == MatrixFormat::MatrixMarket);
    CHECK(format_from_path("x.csv") == MatrixFormat::Csv);
    CHECK(format_from_path("x.json") == MatrixFormat::Json);
    CHECK_THROWS_AS(format_from_path("noext"), IoError);
}

#include "ginv/io.hpp"

#include "ginv/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ginv {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

Matrix read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("MatrixMarket: empty stream");
    std::istringstream header(line);
    std::string banner, object, fmt, field, symmetry;
    header >> banner >> object >> fmt >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lowercase(object) != "matrix")
        throw IoError("MatrixMarket: bad banner line");
    fmt = lowercase(fmt);
    field = lowercase(field);
    symmetry = lowercase(symmetry);
    if (field != "real" && field != "integer" && field != "double")
        throw IoError("MatrixMarket: unsupported field '" + field + "'");

    do {
        if (!std::getline(in, line)) throw IoError("MatrixMarket: missing size line");
    } while (!line.empty() && line[0] == '%');

    std::istringstream size_line(line);
    if (fmt == "array") {
        Index m = 0, n = 0;
        size_line >> m >> n;
        if (m <= 0 || n <= 0) throw IoError("MatrixMarket: bad dimensions");
        const bool sym = symmetry == "symmetric" || symmetry == "skew-symmetric";
        if (sym && m != n) throw IoError("MatrixMarket: symmetric array must be square");
        Matrix A = Matrix::Zero(m, n);
        // array format lists entries column by column; symmetric files store
        // only the lower triangle
        for (Index j = 0; j < n; ++j)
            for (Index i = sym ? j : 0; i < m; ++i) {
                double v;
                if (!(in >> v)) throw IoError("MatrixMarket: truncated array data");
                A(i, j) = v;
                if (i != j && symmetry == "symmetric") A(j, i) = v;
                if (i != j && symmetry == "skew-symmetric") A(j, i) = -v;
            }
        return A;
    }
    if (fmt == "coordinate") {
        Index m = 0, n = 0;
        long long count = 0;
        size_line >> m >> n >> count;
        if (m <= 0 || n <= 0 || count < 0) throw IoError("MatrixMarket: bad size line");
        Matrix A = Matrix::Zero(m, n);
        for (long long k = 0; k < count; ++k) {
            Index i, j;
            double v;
            if (!(in >> i >> j >> v)) throw IoError("MatrixMarket: truncated coordinate data");
            if (i < 1 || i > m || j < 1 || j > n)
                throw IoError("MatrixMarket: coordinate out of range");
            A(i - 1, j - 1) = v;
            if (i != j) {
                if (symmetry == "symmetric") A(j - 1, i - 1) = v;
                if (symmetry == "skew-symmetric") A(j - 1, i - 1) = -v;
            }
        }
        return A;
    }
    throw IoError("MatrixMarket: unsupported format '" + fmt + "'");
}

Matrix read_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("CSV: cannot parse '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("CSV: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("CSV: no data");
    Matrix A(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < A.rows(); ++i)
        for (Index j = 0; j < A.cols(); ++j)
            A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return A;
}

Matrix read_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError(std::string("JSON: ") + e.what());
    }
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw IoError("JSON: expected keys rows, cols, entries");
    const Index m = j["rows"].get<Index>();
    const Index n = j["cols"].get<Index>();
    const auto entries = j["entries"].get<std::vector<double>>();
    if (m <= 0 || n <= 0 || static_cast<Index>(entries.size()) != m * n)
        throw IoError("JSON: entries length does not match rows*cols");
    Matrix A(m, n);
    for (Index i = 0; i < m; ++i)
        for (Index j2 = 0; j2 < n; ++j2)
            A(i, j2) = entries[static_cast<std::size_t>(i * n + j2)];
    return A;
}

}  // namespace

MatrixFormat format_from_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    const std::string ext = dot == std::string::npos ? "" : lowercase(path.substr(dot + 1));
    if (ext == "csv") return MatrixFormat::Csv;
    if (ext == "json") return MatrixFormat::Json;
    if (ext == "mtx" || ext == "mm" || ext == "mtx.gz") return MatrixFormat::MatrixMarket;
    throw IoError("cannot infer matrix format from path '" + path + "'");
}

Matrix read_matrix(std::istream& in, MatrixFormat fmt) {
    Matrix A;
    switch (fmt) {
        case MatrixFormat::MatrixMarket: A = read_matrix_market(in); break;
        case MatrixFormat::Csv: A = read_csv(in); break;
        case MatrixFormat::Json: A = read_json(in); break;
    }
    require_finite(A, "read_matrix");
    return A;
}

Matrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_matrix(in, format_from_path(path));
}

void write_matrix(std::ostream& out, const Matrix& A, MatrixFormat fmt) {
    switch (fmt) {
        case MatrixFormat::MatrixMarket: {
            out << "%%MatrixMarket matrix array real general\n";
            out << A.rows() << " " << A.cols() << "\n";
            out.precision(17);
            for (Index j = 0; j < A.cols(); ++j)
                for (Index i = 0; i < A.rows(); ++i) out << A(i, j) << "\n";
            break;
        }
        case MatrixFormat::Csv: {
            out.precision(17);
            for (Index i = 0; i < A.rows(); ++i) {
                for (Index j = 0; j < A.cols(); ++j) {
                    if (j) out << ",";
                    out << A(i, j);
                }
                out << "\n";
            }
            break;
        }
        case MatrixFormat::Json: {
            nlohmann::json j;
            j["rows"] = A.rows();
            j["cols"] = A.cols();
            std::vector<double> entries(static_cast<std::size_t>(A.size()));
            for (Index i = 0; i < A.rows(); ++i)
                for (Index j2 = 0; j2 < A.cols(); ++j2)
                    entries[static_cast<std::size_t>(i * A.cols() + j2)] = A(i, j2);
            j["entries"] = entries;
            out << j.dump(2) << "\n";
            break;
        }
    }
    if (!out) throw IoError("write_matrix: stream failure");
}

void write_matrix_file(const std::string& path, const Matrix& A) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write_matrix(out, A, format_from_path(path));
}

}  // namespace ginv

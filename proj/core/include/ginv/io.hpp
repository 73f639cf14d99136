#pragma once

#include "ginv/types.hpp"

#include <iosfwd>
#include <string>

namespace ginv {

/// Matrix file formats. Readers accept MatrixMarket (array and coordinate,
/// including the symmetric/skew-symmetric qualifiers) and headerless CSV;
/// writers emit MatrixMarket array, CSV, and a JSON object
/// {"rows": m, "cols": n, "entries": [row-major]}.
enum class MatrixFormat { MatrixMarket, Csv, Json };

/// Guess the format from a filename extension (.mtx/.mm, .csv, .json).
MatrixFormat format_from_path(const std::string& path);

Matrix read_matrix(std::istream& in, MatrixFormat fmt);
Matrix read_matrix_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& A, MatrixFormat fmt);
void write_matrix_file(const std::string& path, const Matrix& A);

}  // namespace ginv

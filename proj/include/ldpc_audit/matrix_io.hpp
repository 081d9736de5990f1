#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ldpc_audit/bit_matrix.hpp"

namespace ldpc_audit {

enum class MatrixFormat { alist, dense };

/// MacKay alist: "n m", "max_col_weight max_row_weight", the n column
/// weights, the m row weights, then n lines of 1-based row indices (one line
/// per column) and m lines of 1-based column indices (one line per row).
/// Zero entries pad short lists and are ignored. The column and row lists
/// must describe the same matrix. Throws FormatError with a line number.
BitMatrix read_alist(std::istream& in);
void write_alist(std::ostream& out, const BitMatrix& m);

/// One line per row of '0'/'1' characters. Blank lines and lines starting
/// with '#' are skipped.
BitMatrix read_dense(std::istream& in);
void write_dense(std::ostream& out, const BitMatrix& m);

/// Guesses the format from the first non-comment line: a line of two
/// integers means alist, anything else is read as dense.
BitMatrix read_matrix(std::istream& in);

BitMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const BitMatrix& m,
                       MatrixFormat format = MatrixFormat::alist);

std::string to_alist(const BitMatrix& m);

}  // namespace ldpc_audit

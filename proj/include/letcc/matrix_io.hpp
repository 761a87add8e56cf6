#pragma once

#include <iosfwd>
#include <string>

#include "letcc/types.hpp"

namespace letcc {

/// Text matrix format: a header line `dims R C` followed by R lines of C
/// whitespace-separated decimals. Blank lines and lines starting with '#' are
/// skipped. Errors throw InvalidArgument naming the offending line.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);

/// Values written with 17 significant digits, so a round trip is exact.
void write_matrix(std::ostream& out, const Matrix& m);
std::string format_matrix(const Matrix& m);

}  // namespace letcc

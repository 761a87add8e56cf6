#include "letcc/matrix_io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

#include "letcc/errors.hpp"
#include "letcc/report.hpp"

namespace letcc {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw InvalidArgument(fmt::format("line {}: {}", line_no, what));
}

double parse_double(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    fail(line_no, fmt::format("not a number: '{}'", tok));
  }
  if (!std::isfinite(v)) fail(line_no, fmt::format("non-finite value '{}'", tok));
  return v;
}

std::size_t parse_count(std::string_view tok, std::size_t line_no) {
  std::size_t v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    fail(line_no, fmt::format("not a nonnegative integer: '{}'", tok));
  }
  return v;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t rows = 0, cols = 0, row = 0;
  Matrix m;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks.front().front() == '#') continue;
    if (!have_header) {
      if (toks.size() != 3 || toks[0] != "dims") fail(line_no, "expected header 'dims R C'");
      rows = parse_count(toks[1], line_no);
      cols = parse_count(toks[2], line_no);
      if (rows == 0 || cols == 0) fail(line_no, "matrix dimensions must be positive");
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      have_header = true;
      continue;
    }
    if (row == rows) fail(line_no, fmt::format("more than {} data rows", rows));
    if (toks.size() != cols) {
      fail(line_no, fmt::format("expected {} values, found {}", cols, toks.size()));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
          parse_double(toks[j], line_no);
    }
    ++row;
  }
  if (!have_header) fail(line_no + 1, "empty matrix file");
  if (row != rows) fail(line_no + 1, fmt::format("expected {} data rows, found {}", rows, row));
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) { out << format_matrix(m); }

std::string format_matrix(const Matrix& m) {
  std::string s = fmt::format("dims {} {}\n", m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) s += ' ';
      s += format_number(m(i, j));
    }
    s += '\n';
  }
  return s;
}

}  // namespace letcc

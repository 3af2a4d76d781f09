#include "radi/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace radi {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void parse_error(const std::filesystem::path& path, int line, const std::string& what) {
  throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line) + ": " + what);
}

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) throw Error(ErrorCode::Io, "cannot open " + path.string());
  }

  // Next line that is neither blank nor a comment.
  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++lineno_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      return true;
    }
    return false;
  }

  bool raw(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++lineno_;
    return true;
  }

  int lineno() const { return lineno_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  int lineno_ = 0;
};

}  // namespace

SparseMatrix read_matrix_market(const std::filesystem::path& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.raw(line)) parse_error(path, 1, "empty file");

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") parse_error(path, 1, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") parse_error(path, 1, "unsupported object '" + object + "'");
  if (format != "coordinate" && format != "array") parse_error(path, 1, "unsupported format '" + format + "'");
  if (field != "real" && field != "integer" && field != "double")
    parse_error(path, 1, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    parse_error(path, 1, "unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  if (!reader.next(line)) parse_error(path, reader.lineno(), "missing size line");
  std::istringstream size_line(line);
  long rows = -1, cols = -1, entries = -1;
  if (format == "coordinate") {
    if (!(size_line >> rows >> cols >> entries) || rows < 0 || cols < 0 || entries < 0)
      parse_error(path, reader.lineno(), "expected 'rows cols entries'");
  } else {
    if (!(size_line >> rows >> cols) || rows < 0 || cols < 0) parse_error(path, reader.lineno(), "expected 'rows cols'");
  }
  if (symmetric && rows != cols) parse_error(path, reader.lineno(), "symmetric matrix must be square");

  std::vector<Eigen::Triplet<double>> triplets;
  if (format == "coordinate") {
    triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * entries : entries));
    for (long k = 0; k < entries; ++k) {
      if (!reader.next(line)) parse_error(path, reader.lineno(), "expected " + std::to_string(entries) + " entries");
      std::istringstream ls(line);
      long i = 0, j = 0;
      double v = 0.0;
      if (!(ls >> i >> j >> v)) parse_error(path, reader.lineno(), "expected 'row col value'");
      if (i < 1 || i > rows || j < 1 || j > cols) parse_error(path, reader.lineno(), "index out of range");
      if (symmetric && j > i) parse_error(path, reader.lineno(), "symmetric storage must be lower triangular");
      triplets.emplace_back(i - 1, j - 1, v);
      if (symmetric && i != j) triplets.emplace_back(j - 1, i - 1, v);
    }
  } else {
    // Column major; symmetric files list the lower triangle only.
    for (long j = 0; j < cols; ++j) {
      for (long i = symmetric ? j : 0; i < rows; ++i) {
        if (!reader.next(line)) parse_error(path, reader.lineno(), "too few array entries");
        std::istringstream ls(line);
        double v = 0.0;
        if (!(ls >> v)) parse_error(path, reader.lineno(), "expected a value");
        if (v == 0.0) continue;
        triplets.emplace_back(i, j, v);
        if (symmetric && i != j) triplets.emplace_back(j, i, v);
      }
    }
  }
  while (reader.next(line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) parse_error(path, reader.lineno(), "trailing data");
  }

  SparseMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

Matrix read_matrix_market_dense(const std::filesystem::path& path) { return Matrix(read_matrix_market(path)); }

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  return out;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& m) {
  std::ofstream out = open_for_write(path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Index j = 0; j < m.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(m, j); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_value(it.value()) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out = open_for_write(path);
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) out << format_value(m(i, j)) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace radi

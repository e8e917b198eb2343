#include "ocp/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ocp {

namespace {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  const auto offs = m.row_offsets();
  const auto cols = m.col_indices();
  const auto vals = m.values();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index p = offs[i]; p < offs[i + 1]; ++p) {
      out << (i + 1) << ' ' << (cols[p] + 1) << ' ' << format_real(vals[p]) << '\n';
    }
  }
}

void write_matrix_market(const std::string& path, const SparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_matrix_market(out, m);
}

SparseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("matrix market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate") {
    throw IoError("matrix market: unsupported header '" + line + "'");
  }
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer") throw IoError("matrix market: unsupported field " + field);
  if (symmetry != "general" && symmetry != "symmetric") {
    throw IoError("matrix market: unsupported symmetry " + symmetry);
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  Index rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz)) throw IoError("matrix market: bad size line");
  }
  std::vector<Triplet> entries;
  entries.reserve(symmetry == "symmetric" ? 2 * nnz : nnz);
  for (Index k = 0; k < nnz; ++k) {
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw IoError("matrix market: truncated entry list");
    entries.push_back({i - 1, j - 1, v});
    if (symmetry == "symmetric" && i != j) entries.push_back({j - 1, i - 1, v});
  }
  return SparseMatrix::from_triplets(rows, cols, entries);
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_matrix_market(in);
}

void write_vector(const std::string& path, std::span<const double> v) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (double x : v) out << format_real(x) << '\n';
}

Vector read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Vector v;
  double x = 0.0;
  while (in >> x) v.push_back(x);
  if (!in.eof()) throw IoError("read_vector: malformed value in " + path);
  return v;
}

}  // namespace ocp

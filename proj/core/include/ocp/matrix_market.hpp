#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "ocp/sparse_matrix.hpp"

namespace ocp {

/// Writes `%%MatrixMarket matrix coordinate real general` with 1-based indices
/// and values printed with 17 significant digits, so a read reproduces them exactly.
void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void write_matrix_market(const std::string& path, const SparseMatrix& m);

/// Reads coordinate real/integer matrices, `general` or `symmetric`.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::string& path);

/// One value per line, 17 significant digits.
void write_vector(const std::string& path, std::span<const double> v);
Vector read_vector(const std::string& path);

}  // namespace ocp

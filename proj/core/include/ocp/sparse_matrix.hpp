#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ocp/vector_ops.hpp"

namespace ocp {

using Index = std::int64_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

class DenseMatrix;

/// Compressed sparse row matrix with strictly increasing column indices per row.
///
/// Instances are immutable once built; every kernel below is a pure function.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Takes ownership of raw CSR arrays and validates the layout.
  SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values);

  /// Sums duplicate (row, col) entries in the order they appear in `entries`.
  static SparseMatrix from_triplets(Index nrows, Index ncols, std::span<const Triplet> entries);
  static SparseMatrix identity(Index n);
  static SparseMatrix diagonal(std::span<const double> diag);
  static SparseMatrix zero(Index nrows, Index ncols);

  Index rows() const { return nrows_; }
  Index cols() const { return ncols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  /// Entry (i, j), zero when structurally absent.
  double at(Index i, Index j) const;
  Vector diagonal_values() const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  /// y = A^T x without forming the transpose.
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;

  DenseMatrix to_dense() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  void validate() const;

  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

Vector spmv(const SparseMatrix& m, std::span<const double> x);
SparseMatrix transpose(const SparseMatrix& m);

/// alpha * a + beta * b on the union sparsity pattern.
SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta,
                                const SparseMatrix& b);
SparseMatrix scaled(double alpha, const SparseMatrix& m);
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

/// P^T A P, the Galerkin product used for coarse multigrid operators.
SparseMatrix galerkin_product(const SparseMatrix& a, const SparseMatrix& p);

/// Largest |a_ij - a_ji| over the pattern union.
double asymmetry(const SparseMatrix& m);

SparseMatrix dense_to_sparse(const DenseMatrix& d, double drop_tol = 0.0);

}  // namespace ocp

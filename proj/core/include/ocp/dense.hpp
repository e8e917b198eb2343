#pragma once

#include <span>
#include <vector>

#include "ocp/vector_ops.hpp"

namespace ocp {

/// Row-major dense matrix. Only used for verification oracles and coarse solves.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Vector multiply(std::span<const double> x) const;
  DenseMatrix transposed() const;
  double frobenius_norm() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

/// LU factorization with partial pivoting. Throws SingularMatrixError when a
/// pivot magnitude falls below 1e-300.
class DenseLU {
 public:
  static constexpr std::size_t kMaxDimension = 5000;

  explicit DenseLU(DenseMatrix a);

  std::size_t size() const { return lu_.rows(); }
  Vector solve(std::span<const double> b) const;
  Vector solve_transpose(std::span<const double> b) const;
  /// Solves for every column of `b`.
  DenseMatrix solve(const DenseMatrix& b) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

Vector dense_solve(const DenseMatrix& a, std::span<const double> b);

/// Lower-triangular Cholesky factor L with A = L L^T.
DenseMatrix cholesky(const DenseMatrix& a);

/// Eigenvalues of a symmetric matrix in ascending order by cyclic Jacobi
/// rotations. Iterates until the off-diagonal Frobenius norm is below
/// 1e-12 * ||A||_F.
Vector dense_symmetric_eig(const DenseMatrix& a);

/// Eigenvalues of the pencil (a, b) for symmetric a and SPD b, ascending.
Vector generalized_symmetric_eig(const DenseMatrix& a, const DenseMatrix& b);

double symmetry_defect(const DenseMatrix& a);

}  // namespace ocp

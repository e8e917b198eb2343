#include "ocp/linear_operator.hpp"

#include <algorithm>

#include "ocp/dense.hpp"

namespace ocp {

void LinearOperator::apply_transpose(std::span<const double>, std::span<double>) const {
  throw Error("LinearOperator: transpose action not available");
}

Vector LinearOperator::operator()(std::span<const double> x) const {
  Vector y(rows());
  apply(x, y);
  return y;
}

void LinearOperator::check_apply_dims(std::span<const double> x, std::span<double> y) const {
  if (static_cast<Index>(x.size()) != cols() || static_cast<Index>(y.size()) != rows()) {
    throw DimensionError("LinearOperator::apply: expected " + std::to_string(cols()) + " -> " +
                         std::to_string(rows()) + ", got " + std::to_string(x.size()) + " -> " +
                         std::to_string(y.size()));
  }
}

void MatrixOperator::apply(std::span<const double> x, std::span<double> y) const {
  m_.multiply(x, y);
}

void MatrixOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
  m_.multiply_transpose(x, y);
}

void FunctionOperator::apply(std::span<const double> x, std::span<double> y) const {
  check_apply_dims(x, y);
  apply_(x, y);
}

void FunctionOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
  if (!apply_t_) LinearOperator::apply_transpose(x, y);
  apply_t_(x, y);
}

void IdentityOperator::apply(std::span<const double> x, std::span<double> y) const {
  check_apply_dims(x, y);
  std::copy(x.begin(), x.end(), y.begin());
}

void ScaledOperator::apply(std::span<const double> x, std::span<double> y) const {
  op_->apply(x, y);
  scale(alpha_, y);
}

void ScaledOperator::apply_transpose(std::span<const double> x, std::span<double> y) const {
  op_->apply_transpose(x, y);
  scale(alpha_, y);
}

BlockOperator::BlockOperator(Index row0, Index row1, Index col0, Index col1)
    : row_sizes_{row0, row1}, col_sizes_{col0, col1} {}

void BlockOperator::set_block(int i, int j, OperatorPtr op) {
  if (i < 0 || i > 1 || j < 0 || j > 1) throw IndexError("BlockOperator: block index out of range");
  if (op && (op->rows() != row_sizes_[i] || op->cols() != col_sizes_[j])) {
    throw DimensionError("BlockOperator: block (" + std::to_string(i) + "," + std::to_string(j) +
                         ") has inconsistent partition sizes");
  }
  blocks_[i][j] = std::move(op);
}

void BlockOperator::apply(std::span<const double> x, std::span<double> y) const {
  check_apply_dims(x, y);
  std::fill(y.begin(), y.end(), 0.0);
  Vector tmp;
  Index row_off = 0;
  for (int i = 0; i < 2; ++i) {
    auto yi = y.subspan(row_off, row_sizes_[i]);
    Index col_off = 0;
    for (int j = 0; j < 2; ++j) {
      if (const auto& b = blocks_[i][j]) {
        tmp.assign(row_sizes_[i], 0.0);
        b->apply(x.subspan(col_off, col_sizes_[j]), tmp);
        axpy(1.0, tmp, yi);
      }
      col_off += col_sizes_[j];
    }
    row_off += row_sizes_[i];
  }
}

OperatorPtr make_operator(SparseMatrix m) {
  return std::make_shared<MatrixOperator>(std::move(m));
}

OperatorPtr make_operator(Index rows, Index cols, FunctionOperator::Fn apply,
                          FunctionOperator::Fn apply_transpose) {
  return std::make_shared<FunctionOperator>(rows, cols, std::move(apply), std::move(apply_transpose));
}

DenseMatrix to_dense(const LinearOperator& op) {
  DenseMatrix d(op.rows(), op.cols());
  Vector e(op.cols(), 0.0);
  Vector col(op.rows());
  for (Index j = 0; j < op.cols(); ++j) {
    e[j] = 1.0;
    op.apply(e, col);
    e[j] = 0.0;
    for (Index i = 0; i < op.rows(); ++i) d(i, j) = col[i];
  }
  return d;
}

}  // namespace ocp

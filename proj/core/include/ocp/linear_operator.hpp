#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "ocp/sparse_matrix.hpp"
#include "ocp/vector_ops.hpp"

namespace ocp {

/// Apply-only linear map y = Op x. Blocks of saddle systems and preconditioners
/// are composed from these without materializing products.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;

  /// Writes Op x into y (y is overwritten, never accumulated into).
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;

  virtual bool has_transpose() const { return false; }
  virtual void apply_transpose(std::span<const double> x, std::span<double> y) const;

  Vector operator()(std::span<const double> x) const;

 protected:
  void check_apply_dims(std::span<const double> x, std::span<double> y) const;
};

using OperatorPtr = std::shared_ptr<const LinearOperator>;

class MatrixOperator final : public LinearOperator {
 public:
  explicit MatrixOperator(SparseMatrix m) : m_(std::move(m)) {}

  Index rows() const override { return m_.rows(); }
  Index cols() const override { return m_.cols(); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  bool has_transpose() const override { return true; }
  void apply_transpose(std::span<const double> x, std::span<double> y) const override;

  const SparseMatrix& matrix() const { return m_; }

 private:
  SparseMatrix m_;
};

/// Wraps callables; the transpose callable is optional.
class FunctionOperator final : public LinearOperator {
 public:
  using Fn = std::function<void(std::span<const double>, std::span<double>)>;

  FunctionOperator(Index rows, Index cols, Fn apply, Fn apply_transpose = {})
      : rows_(rows), cols_(cols), apply_(std::move(apply)), apply_t_(std::move(apply_transpose)) {}

  Index rows() const override { return rows_; }
  Index cols() const override { return cols_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  bool has_transpose() const override { return static_cast<bool>(apply_t_); }
  void apply_transpose(std::span<const double> x, std::span<double> y) const override;

 private:
  Index rows_;
  Index cols_;
  Fn apply_;
  Fn apply_t_;
};

class IdentityOperator final : public LinearOperator {
 public:
  explicit IdentityOperator(Index n) : n_(n) {}
  Index rows() const override { return n_; }
  Index cols() const override { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const override;
  bool has_transpose() const override { return true; }
  void apply_transpose(std::span<const double> x, std::span<double> y) const override { apply(x, y); }

 private:
  Index n_;
};

/// alpha * Op
class ScaledOperator final : public LinearOperator {
 public:
  ScaledOperator(double alpha, OperatorPtr op) : alpha_(alpha), op_(std::move(op)) {}
  Index rows() const override { return op_->rows(); }
  Index cols() const override { return op_->cols(); }
  void apply(std::span<const double> x, std::span<double> y) const override;
  bool has_transpose() const override { return op_->has_transpose(); }
  void apply_transpose(std::span<const double> x, std::span<double> y) const override;

 private:
  double alpha_;
  OperatorPtr op_;
};

/// 2x2 block operator; a null block acts as zero. Partition sizes are taken
/// from the constructor and every non-null block is checked against them.
class BlockOperator final : public LinearOperator {
 public:
  BlockOperator(Index row0, Index row1, Index col0, Index col1);

  void set_block(int i, int j, OperatorPtr op);
  const OperatorPtr& block(int i, int j) const { return blocks_[i][j]; }

  Index rows() const override { return row_sizes_[0] + row_sizes_[1]; }
  Index cols() const override { return col_sizes_[0] + col_sizes_[1]; }
  Index row_size(int i) const { return row_sizes_[i]; }
  Index col_size(int j) const { return col_sizes_[j]; }

  void apply(std::span<const double> x, std::span<double> y) const override;

 private:
  Index row_sizes_[2];
  Index col_sizes_[2];
  OperatorPtr blocks_[2][2];
};

OperatorPtr make_operator(SparseMatrix m);
OperatorPtr make_operator(Index rows, Index cols, FunctionOperator::Fn apply,
                          FunctionOperator::Fn apply_transpose = {});

/// Materializes an operator column by column. Oracle use only.
DenseMatrix to_dense(const LinearOperator& op);

}  // namespace ocp

#pragma once

#include <span>

#include "ocp/linear_operator.hpp"
#include "ocp/sparse_matrix.hpp"

namespace ocp {

struct EigenBounds {
  double lo;
  double hi;
};

/// Chebyshev semi-iteration on the Jacobi-split system, a fixed polynomial in
/// diag(m)^{-1} m. `bounds` must enclose the spectrum of diag(m)^{-1} m; equal
/// bounds degenerate to a single scaled Jacobi step.
class ChebyshevJacobi {
 public:
  ChebyshevJacobi(SparseMatrix m, EigenBounds bounds, int sweeps = 20);

  Vector apply(std::span<const double> b) const;
  void apply(std::span<const double> b, std::span<double> x) const;

  const SparseMatrix& matrix() const { return m_; }
  EigenBounds bounds() const { return bounds_; }
  int sweeps() const { return sweeps_; }

  /// Worst-case residual reduction 1 / T_k((hi + lo) / (hi - lo)) over the bounds.
  double contraction_bound() const;

 private:
  SparseMatrix m_;
  Vector inv_diag_;
  EigenBounds bounds_;
  int sweeps_;
};

/// Chebyshev-accelerated Jacobi iterate after `sweeps` steps from x = 0.
Vector chebyshev_jacobi(const SparseMatrix& m, std::span<const double> b, EigenBounds bounds,
                        int sweeps = 20);

OperatorPtr make_chebyshev_operator(std::shared_ptr<const ChebyshevJacobi> cheb);

}  // namespace ocp

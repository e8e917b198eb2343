#pragma once

#include <memory>
#include <span>
#include <vector>

#include "ocp/chebyshev.hpp"
#include "ocp/dense.hpp"
#include "ocp/kkt.hpp"
#include "ocp/linear_operator.hpp"
#include "ocp/multigrid.hpp"

namespace ocp {

/// Exact block lower-triangular preconditioner [A 0; B2 -S] with the explicit
/// Schur complement S = C + B2 A^{-1} B1^T. Dense, verification only.
OperatorPtr ideal_prec(const SaddleSystem& sys);

/// Dense Schur complement S = C + B2 A^{-1} B1^T.
DenseMatrix schur_complement(const SaddleSystem& sys);

enum class InnerSolve { multigrid, exact };

/// Matching approximation  S_hat = (B + L) A^{-1} (B + L)^T  with L = A / sqrt(beta),
/// so that L A^{-1} L^T = C. The factor B + L is block lower bidiagonal; its
/// diagonal blocks L_kk + (w_k / sqrt(beta)) M are solved by multigrid or by
/// dense LU, the off-diagonal coupling by block substitution.
class MatchingSchur {
 public:
  MatchingSchur(const SaddleSystem& sys, const std::vector<Mesh>& meshes, InnerSolve inner,
                MgConfig mg = {});

  Index size() const { return n_ * num_blocks_; }
  double lambda_scale() const { return lambda_scale_; }

  /// y = (B + L)^{-1} x, approximately when multigrid is used.
  void factor_apply(std::span<const double> x, std::span<double> y) const;
  /// y = (B + L)^{-T} x
  void factor_transpose_apply(std::span<const double> x, std::span<double> y) const;
  /// y = S_hat^{-1} x = (B + L)^{-T} A (B + L)^{-1} x
  void apply_inverse(std::span<const double> x, std::span<double> y) const;

  /// Explicit factor B + L (global, sparse).
  const SparseMatrix& factor() const { return factor_; }
  const SparseMatrix& middle() const { return middle_; }
  const std::vector<SparseMatrix>& factor_diag_blocks() const { return diag_; }

 private:
  Index n_;
  int num_blocks_;
  double lambda_scale_;
  SparseMatrix factor_;
  SparseMatrix middle_;
  std::vector<SparseMatrix> diag_;
  std::vector<SparseMatrix> sub_;
  // Per diagonal block; equal blocks share one solver.
  std::vector<std::shared_ptr<const MgHierarchy>> mg_;
  std::vector<std::shared_ptr<const MgHierarchy>> mg_t_;
  std::vector<std::shared_ptr<const DenseLU>> lu_;
};

/// Stationary system: one factor block D + M / sqrt(beta).
MatchingSchur matching_schur_stationary(const SaddleSystem& sys, const std::vector<Mesh>& meshes,
                                        MgConfig mg = {}, InnerSolve inner = InnerSolve::multigrid);
MatchingSchur matching_schur_instationary(const SaddleSystem& sys, const std::vector<Mesh>& meshes,
                                          MgConfig mg = {},
                                          InnerSolve inner = InnerSolve::multigrid);

/// Dense S_hat with exact factor solves, for spectral checks.
DenseMatrix matching_schur_dense(const SaddleSystem& sys);

/// Eigenvalues of S_hat^{-1} S (exact factors), ascending.
Vector schur_spectrum(const SaddleSystem& sys);

struct PrecOptions {
  int cheb_sweeps = 20;
  EigenBounds cheb_bounds{0.5, 2.0};
  MgConfig mg{};
  /// Replace Chebyshev and multigrid by dense LU solves.
  bool exact_inner = false;
};

/// Block lower-triangular preconditioner [A~ 0; B2 -S~]:
///   z_v = A~^{-1} r_v,   z_zeta = -S~^{-1} (r_zeta - B2 z_v).
class BlockTriangularPrec final : public LinearOperator {
 public:
  BlockTriangularPrec(const SaddleSystem& sys, OperatorPtr a_inv, OperatorPtr s_inv, bool flexible);

  Index rows() const override { return 2 * n_; }
  Index cols() const override { return 2 * n_; }
  void apply(std::span<const double> r, std::span<double> z) const override;

  /// True when an inner map is not a fixed linear operator (needs FGMRES).
  bool flexible() const { return flexible_; }
  const OperatorPtr& a_inverse() const { return a_inv_; }
  const OperatorPtr& schur_inverse() const { return s_inv_; }

 private:
  Index n_;
  SparseMatrix b2_;
  OperatorPtr a_inv_;
  OperatorPtr s_inv_;
  bool flexible_;
};

std::shared_ptr<const BlockTriangularPrec> build_block_triangular(const SaddleSystem& sys,
                                                                 const std::vector<Mesh>& meshes,
                                                                 const PrecOptions& opts = {});

}  // namespace ocp

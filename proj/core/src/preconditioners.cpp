#include "ocp/preconditioners.hpp"

#include <cmath>

namespace ocp {

namespace {

constexpr Index kMaxDenseSize = 5000;

/// Sparse A^{-1} as dense columns is avoided: dense LU on each distinct
/// diagonal block of a block-diagonal matrix.
DenseMatrix dense_block_diagonal_inverse_apply(const SaddleSystem& sys, const DenseMatrix& rhs) {
  const Index n = sys.n_state;
  DenseMatrix out(rhs.rows(), rhs.cols());
  const DenseLU lu(sys.mass.to_dense());
  Vector col(n);
  for (int k = 0; k < sys.num_blocks; ++k) {
    const double inv_w = 1.0 / sys.weights[k];
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
      for (Index i = 0; i < n; ++i) col[i] = rhs(k * n + i, j);
      const Vector s = lu.solve(col);
      for (Index i = 0; i < n; ++i) out(k * n + i, j) = inv_w * s[i];
    }
  }
  return out;
}

}  // namespace

DenseMatrix schur_complement(const SaddleSystem& sys) {
  if (sys.block_size() > kMaxDenseSize) {
    throw DimensionError("schur_complement: system too large for dense formation");
  }
  const DenseMatrix ainv_b1t = dense_block_diagonal_inverse_apply(sys, sys.B1t.to_dense());
  return sys.C.to_dense() + sys.B2.to_dense() * ainv_b1t;
}

OperatorPtr ideal_prec(const SaddleSystem& sys) {
  const Index n = sys.block_size();
  auto a_lu = std::make_shared<DenseLU>(sys.A.to_dense());
  auto s_lu = std::make_shared<DenseLU>(schur_complement(sys));
  auto b2 = std::make_shared<SparseMatrix>(sys.B2);
  return make_operator(2 * n, 2 * n, [=](std::span<const double> r, std::span<double> z) {
    const Vector zv = a_lu->solve(r.subspan(0, n));
    Vector rz(r.begin() + n, r.end());
    axpy(-1.0, spmv(*b2, zv), rz);
    const Vector zz = s_lu->solve(rz);
    for (Index i = 0; i < n; ++i) {
      z[i] = zv[i];
      z[n + i] = -zz[i];
    }
  });
}

MatchingSchur::MatchingSchur(const SaddleSystem& sys, const std::vector<Mesh>& meshes,
                             InnerSolve inner, MgConfig mg)
    : n_(sys.n_state), num_blocks_(sys.num_blocks), lambda_scale_(1.0 / std::sqrt(sys.beta)) {
  middle_ = sys.A;
  factor_ = linear_combination(1.0, sys.B2, lambda_scale_, sys.A);
  sub_ = sys.sub_blocks;
  for (int k = 0; k < num_blocks_; ++k) {
    diag_.push_back(linear_combination(1.0, sys.diag_blocks[k], lambda_scale_ * sys.weights[k], sys.mass));
  }
  if (inner == InnerSolve::multigrid) {
    if (meshes.empty() || meshes.back().num_nodes() != n_) {
      throw DimensionError("MatchingSchur: mesh hierarchy does not match the system");
    }
  } else if (n_ > kMaxDenseSize) {
    throw DimensionError("MatchingSchur: exact inner solves limited to blocks of size 5000");
  }
  for (int k = 0; k < num_blocks_; ++k) {
    int same = -1;
    for (int j = 0; j < k && same < 0; ++j)
      if (diag_[j] == diag_[k]) same = j;
    if (inner == InnerSolve::exact) {
      lu_.push_back(same >= 0 ? lu_[same] : std::make_shared<DenseLU>(diag_[k].to_dense()));
      continue;
    }
    if (same >= 0) {
      mg_.push_back(mg_[same]);
      mg_t_.push_back(mg_t_[same]);
      continue;
    }
    auto h = std::make_shared<MgHierarchy>(meshes, diag_[k], mg);
    mg_.push_back(h);
    const SparseMatrix dt = transpose(diag_[k]);
    mg_t_.push_back(dt == diag_[k] ? h : std::make_shared<MgHierarchy>(meshes, dt, mg));
  }
}

void MatchingSchur::factor_apply(std::span<const double> x, std::span<double> y) const {
  block_forward_substitution(
      sub_, n_,
      [&](int k, std::span<const double> b, std::span<double> out) {
        if (!lu_.empty()) {
          const Vector s = lu_[k]->solve(b);
          std::copy(s.begin(), s.end(), out.begin());
        } else {
          mg_[k]->apply(b, out);
        }
      },
      x, y);
}

void MatchingSchur::factor_transpose_apply(std::span<const double> x, std::span<double> y) const {
  block_backward_substitution(
      sub_, n_,
      [&](int k, std::span<const double> b, std::span<double> out) {
        if (!lu_.empty()) {
          const Vector s = lu_[k]->solve_transpose(b);
          std::copy(s.begin(), s.end(), out.begin());
        } else {
          mg_t_[k]->apply(b, out);
        }
      },
      x, y);
}

void MatchingSchur::apply_inverse(std::span<const double> x, std::span<double> y) const {
  Vector t(size());
  factor_apply(x, t);
  const Vector at = spmv(middle_, t);
  factor_transpose_apply(at, y);
}

MatchingSchur matching_schur_stationary(const SaddleSystem& sys, const std::vector<Mesh>& meshes,
                                        MgConfig mg, InnerSolve inner) {
  if (sys.scheme != TimeScheme::stationary) {
    throw ConfigError("matching_schur_stationary: system is instationary");
  }
  return MatchingSchur(sys, meshes, inner, mg);
}

MatchingSchur matching_schur_instationary(const SaddleSystem& sys, const std::vector<Mesh>& meshes,
                                          MgConfig mg, InnerSolve inner) {
  if (sys.scheme == TimeScheme::stationary) {
    throw ConfigError("matching_schur_instationary: system is stationary");
  }
  return MatchingSchur(sys, meshes, inner, mg);
}

DenseMatrix matching_schur_dense(const SaddleSystem& sys) {
  if (sys.block_size() > kMaxDenseSize) {
    throw DimensionError("matching_schur_dense: system too large for dense formation");
  }
  const double s = 1.0 / std::sqrt(sys.beta);
  const DenseMatrix x = linear_combination(1.0, sys.B2, s, sys.A).to_dense();
  const DenseMatrix ainv_xt = dense_block_diagonal_inverse_apply(sys, x.transposed());
  return x * ainv_xt;
}

Vector schur_spectrum(const SaddleSystem& sys) {
  DenseMatrix s = schur_complement(sys);
  DenseMatrix shat = matching_schur_dense(sys);
  // Both are symmetric in exact arithmetic; remove rounding asymmetry.
  for (std::size_t i = 0; i < s.rows(); ++i) {
    for (std::size_t j = i + 1; j < s.cols(); ++j) {
      s(i, j) = s(j, i) = 0.5 * (s(i, j) + s(j, i));
      shat(i, j) = shat(j, i) = 0.5 * (shat(i, j) + shat(j, i));
    }
  }
  return generalized_symmetric_eig(s, shat);
}

BlockTriangularPrec::BlockTriangularPrec(const SaddleSystem& sys, OperatorPtr a_inv,
                                         OperatorPtr s_inv, bool flexible)
    : n_(sys.block_size()), b2_(sys.B2), a_inv_(std::move(a_inv)), s_inv_(std::move(s_inv)),
      flexible_(flexible) {
  if (a_inv_->rows() != n_ || s_inv_->rows() != n_) {
    throw DimensionError("BlockTriangularPrec: inner operator sizes differ from the system");
  }
}

void BlockTriangularPrec::apply(std::span<const double> r, std::span<double> z) const {
  check_apply_dims(r, z);
  auto zv = z.subspan(0, n_);
  auto zz = z.subspan(n_, n_);
  a_inv_->apply(r.subspan(0, n_), zv);
  Vector rz(r.begin() + n_, r.end());
  Vector bz(n_);
  b2_.multiply(zv, bz);
  axpy(-1.0, bz, rz);
  s_inv_->apply(rz, zz);
  scale(-1.0, zz);
}

std::shared_ptr<const BlockTriangularPrec> build_block_triangular(const SaddleSystem& sys,
                                                                 const std::vector<Mesh>& meshes,
                                                                 const PrecOptions& opts) {
  if (!(opts.cheb_bounds.lo > 0.0) || !(opts.cheb_bounds.lo <= opts.cheb_bounds.hi)) {
    throw ConfigError("build_block_triangular: Chebyshev bounds must satisfy 0 < lo <= hi");
  }
  if (opts.cheb_sweeps < 1 || opts.mg.cycles < 1) {
    throw ConfigError("build_block_triangular: sweeps and cycles must be positive");
  }
  const Index n = sys.block_size();
  OperatorPtr a_inv;
  if (opts.exact_inner) {
    if (sys.n_state > kMaxDenseSize) {
      throw ConfigError("build_block_triangular: exact inner solves need blocks of size <= 5000");
    }
    auto lu = std::make_shared<DenseLU>(sys.mass.to_dense());
    auto weights = sys.weights;
    const Index ns = sys.n_state;
    a_inv = make_operator(n, n, [lu, weights, ns](std::span<const double> x, std::span<double> y) {
      for (std::size_t k = 0; k < weights.size(); ++k) {
        const Vector s = lu->solve(x.subspan(k * ns, ns));
        for (Index i = 0; i < ns; ++i) y[k * ns + i] = s[i] / weights[k];
      }
    });
  } else {
    a_inv = make_chebyshev_operator(
        std::make_shared<ChebyshevJacobi>(sys.A, opts.cheb_bounds, opts.cheb_sweeps));
  }
  auto schur = std::make_shared<MatchingSchur>(
      sys, meshes, opts.exact_inner ? InnerSolve::exact : InnerSolve::multigrid, opts.mg);
  auto s_inv = make_operator(n, n, [schur](std::span<const double> x, std::span<double> y) {
    schur->apply_inverse(x, y);
  });
  // Chebyshev with a fixed sweep count, fixed-cycle multigrid and LU are all
  // constant linear maps, so plain GMRES applies.
  return std::make_shared<BlockTriangularPrec>(sys, a_inv, s_inv, false);
}

}  // namespace ocp

#include "ocp/multigrid.hpp"

#include <string>

#include "ocp/fem.hpp"

namespace ocp {

namespace {

/// Linear interpolation between interior nodes only: rows of constrained fine
/// nodes and columns of constrained coarse nodes are dropped.
SparseMatrix interior_prolongation(const Mesh& fine, const Mesh& coarse) {
  const SparseMatrix full = prolongation(fine, coarse.num_nodes());
  std::vector<Triplet> t;
  const auto offs = full.row_offsets();
  const auto cols = full.col_indices();
  const auto vals = full.values();
  for (Index i = 0; i < full.rows(); ++i) {
    if (fine.is_boundary(i)) continue;
    for (Index p = offs[i]; p < offs[i + 1]; ++p) {
      if (!coarse.is_boundary(cols[p])) t.push_back({i, cols[p], vals[p]});
    }
  }
  return SparseMatrix::from_triplets(full.rows(), full.cols(), t);
}

}  // namespace

MgHierarchy::MgHierarchy(const std::vector<Mesh>& meshes, SparseMatrix fine_operator,
                         MgConfig config)
    : config_(config) {
  if (meshes.empty()) throw Error("MgHierarchy: at least one mesh is required");
  if (fine_operator.rows() != meshes.back().num_nodes() ||
      fine_operator.cols() != fine_operator.rows()) {
    throw DimensionError("MgHierarchy: fine operator does not match the finest mesh");
  }
  if (config.cycles < 1 || config.pre_sweeps < 0 || config.post_sweeps < 0 ||
      !(config.jacobi_weight > 0.0)) {
    throw ConfigError("MgHierarchy: invalid cycle/smoother configuration");
  }
  const int nlev = static_cast<int>(meshes.size());
  levels_.resize(nlev);
  levels_[nlev - 1].op = std::move(fine_operator);
  for (int l = nlev - 1; l >= 0; --l) {
    Level& lv = levels_[l];
    lv.constrained = meshes[l].boundary_mask();
    if (l + 1 < nlev) {
      const Level& fine = levels_[l + 1];
      SparseMatrix coarse_op = galerkin_product(fine.op, fine.prolong);
      lv.op = constrain(coarse_op, lv.constrained, 1.0);
    }
    if (l > 0) {
      if (meshes[l].num_nodes() <= meshes[l - 1].num_nodes()) {
        throw Error("MgHierarchy: meshes must be ordered coarse to fine");
      }
      lv.prolong = interior_prolongation(meshes[l], meshes[l - 1]);
      lv.restrict_op = transpose(lv.prolong);
    }
    lv.inv_diag = lv.op.diagonal_values();
    for (Index i = 0; i < static_cast<Index>(lv.inv_diag.size()); ++i) {
      if (lv.inv_diag[i] == 0.0) {
        throw SingularMatrixError("MgHierarchy: zero diagonal on level " + std::to_string(l));
      }
      lv.inv_diag[i] = 1.0 / lv.inv_diag[i];
    }
  }
  coarse_ = std::make_unique<DenseLU>(levels_.front().op.to_dense());
}

void MgHierarchy::smooth(const Level& lv, std::span<const double> b, std::span<double> x,
                         int sweeps) const {
  const Index n = lv.op.rows();
  Vector ax(n);
  for (int s = 0; s < sweeps; ++s) {
    lv.op.multiply(x, ax);
    for (Index i = 0; i < n; ++i) {
      if (lv.constrained[i]) {
        x[i] = b[i] * lv.inv_diag[i];
      } else {
        x[i] += config_.jacobi_weight * lv.inv_diag[i] * (b[i] - ax[i]);
      }
    }
  }
}

void MgHierarchy::cycle(int level, std::span<const double> b, std::span<double> x) const {
  if (level == 0) {
    const Vector sol = coarse_->solve(b);
    std::copy(sol.begin(), sol.end(), x.begin());
    return;
  }
  const Level& lv = levels_[level];
  const Index n = lv.op.rows();
  std::fill(x.begin(), x.end(), 0.0);
  smooth(lv, b, x, config_.pre_sweeps);

  Vector r(n);
  lv.op.multiply(x, r);
  for (Index i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const Vector rc = spmv(lv.restrict_op, r);
  Vector ec(rc.size());
  cycle(level - 1, rc, ec);
  const Vector e = spmv(lv.prolong, ec);
  axpy(1.0, e, x);

  smooth(lv, b, x, config_.post_sweeps);
}

void MgHierarchy::vcycle(std::span<const double> b, std::span<double> x) const {
  const Level& top = levels_.back();
  const Index n = top.op.rows();
  Vector r(n);
  top.op.multiply(x, r);
  for (Index i = 0; i < n; ++i) r[i] = b[i] - r[i];
  Vector e(n);
  cycle(num_levels() - 1, r, e);
  axpy(1.0, e, x);
}

void MgHierarchy::apply(std::span<const double> b, std::span<double> x) const {
  if (static_cast<Index>(b.size()) != size() || static_cast<Index>(x.size()) != size()) {
    throw DimensionError("MgHierarchy::apply: dimension mismatch");
  }
  std::fill(x.begin(), x.end(), 0.0);
  for (int c = 0; c < config_.cycles; ++c) vcycle(b, x);
}

Vector MgHierarchy::apply(std::span<const double> b) const {
  Vector x(b.size());
  apply(b, x);
  return x;
}

Vector mg_vcycle(const MgHierarchy& h, std::span<const double> b, int cycles) {
  if (cycles < 0) throw ConfigError("mg_vcycle: cycles must be nonnegative");
  Vector x(b.size(), 0.0);
  if (static_cast<Index>(b.size()) != h.size()) throw DimensionError("mg_vcycle: dimension mismatch");
  for (int c = 0; c < cycles; ++c) h.vcycle(b, x);
  return x;
}

OperatorPtr make_multigrid_operator(std::shared_ptr<const MgHierarchy> h) {
  const Index n = h->size();
  return make_operator(n, n, [h](std::span<const double> x, std::span<double> y) { h->apply(x, y); });
}

}  // namespace ocp

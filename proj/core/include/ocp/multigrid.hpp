#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ocp/dense.hpp"
#include "ocp/linear_operator.hpp"
#include "ocp/mesh.hpp"
#include "ocp/sparse_matrix.hpp"

namespace ocp {

struct MgConfig {
  int cycles = 2;
  int pre_sweeps = 1;
  int post_sweeps = 1;
  double jacobi_weight = 2.0 / 3.0;
};

/// Geometric multigrid on nested structured meshes. Coarse operators are
/// Galerkin products P^T A P with prolongations restricted to unconstrained
/// (interior) nodes; constrained rows carry only a diagonal entry and are
/// solved exactly by the smoother.
class MgHierarchy {
 public:
  /// `meshes` runs coarse to fine and `fine_operator` lives on meshes.back().
  /// Constrained rows are the boundary nodes of each mesh.
  MgHierarchy(const std::vector<Mesh>& meshes, SparseMatrix fine_operator, MgConfig config = {});

  int num_levels() const { return static_cast<int>(levels_.size()); }
  Index size() const { return levels_.back().op.rows(); }
  const MgConfig& config() const { return config_; }
  const SparseMatrix& level_operator(int level) const { return levels_[level].op; }
  const SparseMatrix& level_prolongation(int level) const { return levels_[level].prolong; }

  /// `config().cycles` V-cycles from a zero initial guess.
  Vector apply(std::span<const double> b) const;
  void apply(std::span<const double> b, std::span<double> x) const;
  /// One V-cycle correction applied in place: x <- x + V(b - A x).
  void vcycle(std::span<const double> b, std::span<double> x) const;

 private:
  struct Level {
    SparseMatrix op;
    Vector inv_diag;
    std::vector<char> constrained;
    SparseMatrix prolong;  // from level - 1; empty on level 0
    SparseMatrix restrict_op;
  };

  void cycle(int level, std::span<const double> b, std::span<double> x) const;
  void smooth(const Level& lv, std::span<const double> b, std::span<double> x, int sweeps) const;

  MgConfig config_;
  std::vector<Level> levels_;
  std::unique_ptr<DenseLU> coarse_;
};

/// Applies `h->config().cycles` V-cycles; linear and fixed for a fixed hierarchy.
Vector mg_vcycle(const MgHierarchy& h, std::span<const double> b, int cycles = 2);

OperatorPtr make_multigrid_operator(std::shared_ptr<const MgHierarchy> h);

}  // namespace ocp

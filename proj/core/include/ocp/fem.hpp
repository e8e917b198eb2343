#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ocp/mesh.hpp"
#include "ocp/sparse_matrix.hpp"

namespace ocp {

using ScalarField = std::function<double(double x, double y)>;
using VectorField = std::function<Point(double x, double y)>;

/// P1 mass matrix, local blocks (area / 12) [[2,1,1],[1,2,1],[1,1,2]].
SparseMatrix assemble_mass(const Mesh& mesh);

/// Row sums of the P1 mass matrix.
Vector lumped_mass(const Mesh& mesh);

/// diffusivity * (grad phi_j, grad phi_i).
SparseMatrix assemble_stiffness(const Mesh& mesh, double diffusivity = 1.0);

/// (w . grad phi_j, phi_i) with the three-point edge-midpoint rule.
SparseMatrix assemble_convection(const Mesh& mesh, const VectorField& wind);

Vector interpolate(const Mesh& mesh, const ScalarField& f);

struct AssembledForm {
  SparseMatrix matrix;
  Vector rhs;
  /// Column contributions A[:, boundary] * values moved out of the right-hand side.
  Vector lifting;
  std::vector<Index> constrained;
};

/// Symmetric elimination: constrained rows and columns are zeroed except for a
/// unit diagonal, interior rhs entries lose A[:, boundary] * values, and
/// constrained rhs entries are set to the prescribed values.
AssembledForm apply_dirichlet(const SparseMatrix& matrix, std::span<const double> rhs,
                              std::span<const Index> boundary, std::span<const double> values);

/// Zeros constrained rows and columns of `m` and puts `diagonal` on the
/// constrained diagonal entries (0 removes them entirely).
SparseMatrix constrain(const SparseMatrix& m, std::span<const char> constrained_mask,
                       double diagonal);

}  // namespace ocp

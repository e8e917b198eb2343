#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ocp/fem.hpp"
#include "ocp/linear_operator.hpp"
#include "ocp/mesh.hpp"
#include "ocp/sparse_matrix.hpp"

namespace ocp {

enum class TimeScheme { stationary, backward_euler, trapezoidal };

std::string to_string(TimeScheme s);
TimeScheme parse_time_scheme(const std::string& name);

/// n_t uniform points on [t0, tf], including both ends.
struct TimeGrid {
  double t0 = 0.0;
  double tf = 1.0;
  int n_t = 2;

  TimeGrid() = default;
  TimeGrid(double t0, double tf, int n_t);

  double tau() const { return (tf - t0) / (n_t - 1); }
  double time(int k) const { return k + 1 == n_t ? tf : t0 + k * tau(); }
  /// Number of time points carrying unknowns (t0 is fixed by the initial condition).
  int num_steps() const { return n_t - 1; }
};

using SpaceTimeField = std::function<double(double x, double y, double t)>;

/// Spatial forward operator D, possibly depending on the current state and time.
/// Returned without boundary treatment; the builders apply it.
using ForwardOperator =
    std::function<SparseMatrix(const Mesh& mesh, std::span<const double> state, double t)>;

/// Distributed control problem  min 1/2 ||v - v_d||^2 + beta/2 ||u||^2
/// subject to (dv/dt +) D v = u + f with Dirichlet data on the whole boundary.
struct ControlProblem {
  ForwardOperator forward_operator;
  SpaceTimeField desired_state;
  SpaceTimeField force;           // empty means f = 0
  SpaceTimeField boundary_value;  // empty means homogeneous
  ScalarField initial_condition;  // instationary only; empty means v(x, t0) = 0
  double beta = 1e-4;
  /// True when forward_operator reads its state argument (needs Picard).
  bool state_dependent = false;
};

/// All-at-once KKT system
///
///   [ A    B2^T ] [ v    ]   [ b_v    ]
///   [ B2   -C   ] [ zeta ] = [ b_zeta ]
///
/// over `num_blocks` time blocks of `n_state` nodes each (one block when
/// stationary). B2 is block lower bidiagonal with diagonal blocks L_kk and
/// subdiagonal blocks L_{k,k-1}; A = blockdiag(w_k M) and C = A / beta.
/// Boundary rows decouple: L_kk has a unit diagonal there, L_{k,k-1} is zero,
/// and the right-hand side pins v to the Dirichlet data with zeta = 0.
struct SaddleSystem {
  TimeScheme scheme = TimeScheme::stationary;
  double beta = 1.0;
  Index n_state = 0;
  int num_blocks = 1;
  std::optional<TimeGrid> time;

  Vector weights;                         // w_k per block
  SparseMatrix mass;                      // P1 mass with boundary unit diagonal
  SparseMatrix mass_full;                 // P1 mass without boundary treatment
  std::vector<SparseMatrix> diag_blocks;  // L_kk
  std::vector<SparseMatrix> sub_blocks;   // L_{k,k-1} for k = 1..num_blocks-1
  std::vector<char> constrained;          // per node

  SparseMatrix A;
  SparseMatrix B2;
  SparseMatrix B1t;
  SparseMatrix C;
  Vector rhs_v;
  Vector rhs_zeta;

  Vector desired;        // stacked nodal v_d per block
  Vector boundary_data;  // stacked nodal Dirichlet values (zero in the interior)

  Index block_size() const { return n_state * num_blocks; }
  Index size() const { return 2 * block_size(); }
  Vector rhs() const;

  std::shared_ptr<const BlockOperator> op() const;
  /// Monolithic sparse matrix of the saddle system.
  SparseMatrix assemble() const;
};

/// Discrete adjoint of an assembled forward block.
SparseMatrix derive_adjoint(const SparseMatrix& forward_block);

SaddleSystem build_stationary_kkt(const ControlProblem& p, const Mesh& mesh,
                                  std::span<const double> state = {});

/// `state` (optional) is the stacked trajectory v_1..v_{n_t-1} handed to the
/// forward operator; the initial state is taken from the initial condition.
SaddleSystem build_instationary_kkt(const ControlProblem& p, const Mesh& mesh, const TimeGrid& grid,
                                    TimeScheme scheme, std::span<const double> state = {});

/// Splits a stacked (v, zeta) solution and recovers the control u = zeta / beta.
struct KktSolution {
  Vector state;
  Vector adjoint;
  Vector control;
};
KktSolution split_solution(const SaddleSystem& sys, std::span<const double> x);

/// Solves with one diagonal block (or its transpose).
using BlockSolve = std::function<void(int block, std::span<const double> rhs, std::span<double> x)>;

/// x = L^{-1} r for a block lower bidiagonal L given by its diagonal solves and
/// subdiagonal blocks.
void block_forward_substitution(const std::vector<SparseMatrix>& sub_blocks, Index n,
                                const BlockSolve& diag_solve, std::span<const double> r,
                                std::span<double> x);
/// x = L^{-T} r; `diag_solve_t` solves with transposed diagonal blocks.
void block_backward_substitution(const std::vector<SparseMatrix>& sub_blocks, Index n,
                                 const BlockSolve& diag_solve_t, std::span<const double> r,
                                 std::span<double> x);

/// Exact block solves for B2 by dense LU of each distinct diagonal block.
class ExactForwardSolver {
 public:
  explicit ExactForwardSolver(const SaddleSystem& sys);

  /// v = B2^{-1} r
  Vector solve(std::span<const double> r) const;
  /// zeta = B2^{-T} r
  Vector solve_transpose(std::span<const double> r) const;

 private:
  const SaddleSystem* sys_;
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Reduced-space view of the KKT system for a given (interior) control u:
/// the state solves B2 v = b_zeta + A u, the adjoint solves B2^T zeta = b_v - A v,
/// and J(u) = sum_k w_k [1/2 (v_k - vd_k)^T M (v_k - vd_k) + beta/2 u_k^T M u_k].
class ReducedProblem {
 public:
  explicit ReducedProblem(const SaddleSystem& sys);

  Vector state(std::span<const double> control) const;
  Vector adjoint(std::span<const double> state) const;
  double cost(std::span<const double> state, std::span<const double> control) const;
  double cost(std::span<const double> control) const;
  /// dJ/du . direction = (beta u - zeta)^T A direction
  double directional_derivative(std::span<const double> control,
                                std::span<const double> direction) const;

 private:
  const SaddleSystem* sys_;
  ExactForwardSolver solver_;
};

/// Sequential time stepping of M dv/dt + D v = M u + f with the Dirichlet data
/// of `p`. `control` holds n_t stacked nodal vectors (t0 included; backward
/// Euler ignores the first). Returns n_t stacked states, v_0 first.
Vector forward_march(const ControlProblem& p, const Mesh& mesh, const TimeGrid& grid,
                     TimeScheme scheme, std::span<const double> control = {});

}  // namespace ocp

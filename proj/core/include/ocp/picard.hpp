#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ocp/kkt.hpp"
#include "ocp/krylov.hpp"
#include "ocp/mesh.hpp"
#include "ocp/preconditioners.hpp"

namespace ocp {

struct PicardConfig {
  int max_iters = 10;
  double nl_rtol = 1e-5;
  KrylovConfig linear{};
  PrecOptions prec{};
};

struct PicardReport {
  int iterations = 0;
  /// Entry 0 is the residual of the zero initial guess, then one per iteration.
  std::vector<double> residual_history;
  std::vector<int> linear_iterations;
  bool converged = false;
};

struct PicardResult {
  Vector x;  // stacked (v, zeta) of the last iterate
  KktSolution solution;
  PicardReport report;
};

/// Fixed-point relinearization: assemble D at the current state, solve the
/// linear KKT system with GMRES and the block-triangular preconditioner,
/// repeat. The nonlinear residual ||A(v) x - b(v)|| is measured with the
/// operator rebuilt at the new iterate. `meshes` runs coarse to fine; the
/// system lives on meshes.back(). Without `grid` the problem is stationary.
PicardResult picard_solve(const ControlProblem& p, const std::vector<Mesh>& meshes,
                          const std::optional<TimeGrid>& grid, TimeScheme scheme,
                          const PicardConfig& cfg = {});

SaddleSystem build_kkt(const ControlProblem& p, const Mesh& mesh,
                       const std::optional<TimeGrid>& grid, TimeScheme scheme,
                       std::span<const double> state = {});

/// ||A(v) x - b(v)|| with v taken from x.
double nonlinear_residual(const ControlProblem& p, const Mesh& mesh,
                          const std::optional<TimeGrid>& grid, TimeScheme scheme,
                          std::span<const double> x);

void write_nonlinear_csv(const std::string& path, const PicardReport& report);

}  // namespace ocp

#pragma once

#include <span>
#include <string>
#include <vector>

#include "ocp/linear_operator.hpp"

namespace ocp {

struct SolveReport {
  int iterations = 0;
  /// Residual 2-norms; entry 0 is the initial residual, then one per inner
  /// iteration. Right preconditioning makes these true residual norms.
  std::vector<double> residual_history;
  bool converged = false;
  double final_relative_residual = 0.0;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
};

struct KrylovConfig {
  double rtol = 1e-6;
  int restart = 10;
  int maxit = 1000;
};

struct KrylovResult {
  Vector x;
  SolveReport report;
};

/// Right-preconditioned restarted GMRES with modified Gram-Schmidt.
/// Converged when ||b - A x|| <= rtol ||b||, checked on the true residual.
/// Exceeding maxit is reported through `converged`, not thrown.
KrylovResult gmres(const LinearOperator& op, const LinearOperator& precond,
                   std::span<const double> b, const KrylovConfig& cfg = {},
                   std::span<const double> x0 = {});

/// Flexible variant: keeps the preconditioned basis so the preconditioner may
/// change between iterations.
KrylovResult fgmres(const LinearOperator& op, const LinearOperator& precond,
                    std::span<const double> b, const KrylovConfig& cfg = {},
                    std::span<const double> x0 = {});

void write_residual_csv(const std::string& path, const SolveReport& report);

}  // namespace ocp

#include "ocp/krylov.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace ocp {

namespace {

void givens(double a, double b, double& c, double& s) {
  if (b == 0.0) {
    c = 1.0;
    s = 0.0;
  } else if (std::abs(b) > std::abs(a)) {
    const double t = a / b;
    s = 1.0 / std::sqrt(1.0 + t * t);
    c = s * t;
  } else {
    const double t = b / a;
    c = 1.0 / std::sqrt(1.0 + t * t);
    s = c * t;
  }
}

KrylovResult run_gmres(const LinearOperator& op, const LinearOperator& precond,
                       std::span<const double> b, const KrylovConfig& cfg,
                       std::span<const double> x0, bool flexible) {
  const auto start = std::chrono::steady_clock::now();
  const Index n = op.rows();
  if (op.cols() != n) throw DimensionError("gmres: operator is not square");
  if (precond.rows() != n || precond.cols() != n) {
    throw DimensionError("gmres: preconditioner dimensions differ from the operator");
  }
  if (static_cast<Index>(b.size()) != n) throw DimensionError("gmres: rhs dimension mismatch");
  if (!x0.empty() && static_cast<Index>(x0.size()) != n) {
    throw DimensionError("gmres: initial guess dimension mismatch");
  }
  if (!(cfg.rtol > 0.0 && cfg.rtol < 1.0) || cfg.restart < 1 || cfg.maxit < 0) {
    throw ConfigError("gmres: require 0 < rtol < 1, restart >= 1, maxit >= 0");
  }

  KrylovResult out;
  Vector& x = out.x;
  SolveReport& rep = out.report;
  x = x0.empty() ? Vector(n, 0.0) : Vector(x0.begin(), x0.end());

  const double bnorm = norm2(b);
  const int m = cfg.restart;
  std::vector<Vector> v(m + 1, Vector(n));
  std::vector<Vector> z(flexible ? m : 0, Vector(n));
  std::vector<double> h((m + 1) * m, 0.0);
  auto H = [&](int i, int j) -> double& { return h[i * m + j]; };
  std::vector<double> cs(m), sn(m), g(m + 1);
  Vector w(n), tmp(n);

  auto true_residual = [&](Vector& r) {
    op.apply(x, r);
    for (Index i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return norm2(r);
  };

  const double target = cfg.rtol * bnorm;
  double rnorm = true_residual(v[0]);
  rep.residual_history.push_back(rnorm);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    rep.final_relative_residual = 0.0;
    rep.residual_history.back() = 0.0;
    rep.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }

  while (rnorm > target && rep.iterations < cfg.maxit) {
    scale(1.0 / rnorm, v[0]);
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = rnorm;
    int j = 0;
    bool lucky = false;
    for (; j < m && rep.iterations < cfg.maxit; ++j) {
      std::span<double> zj = flexible ? std::span<double>(z[j]) : std::span<double>(tmp);
      precond.apply(v[j], zj);
      op.apply(zj, w);
      for (int i = 0; i <= j; ++i) {
        H(i, j) = dot(w, v[i]);
        axpy(-H(i, j), v[i], w);
      }
      const double hnext = norm2(w);
      H(j + 1, j) = hnext;
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * H(i, j) + sn[i] * H(i + 1, j);
        H(i + 1, j) = -sn[i] * H(i, j) + cs[i] * H(i + 1, j);
        H(i, j) = t;
      }
      givens(H(j, j), H(j + 1, j), cs[j], sn[j]);
      H(j, j) = cs[j] * H(j, j) + sn[j] * H(j + 1, j);
      H(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];
      ++rep.iterations;
      rep.residual_history.push_back(std::abs(g[j + 1]));
      if (hnext < 1e-300) {
        if (std::abs(H(j, j)) < 1e-300) {
          throw BreakdownError("gmres: singular Hessenberg matrix at iteration " +
                               std::to_string(rep.iterations));
        }
        lucky = true;
        ++j;
        break;
      }
      for (Index i = 0; i < n; ++i) v[j + 1][i] = w[i] / hnext;
      if (std::abs(g[j + 1]) <= target) {
        ++j;
        break;
      }
    }
    // Back substitution for the least-squares coefficients.
    std::vector<double> y(j);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k = i + 1; k < j; ++k) s -= H(i, k) * y[k];
      y[i] = s / H(i, i);
    }
    if (flexible) {
      for (int i = 0; i < j; ++i) axpy(y[i], z[i], x);
    } else {
      std::fill(w.begin(), w.end(), 0.0);
      for (int i = 0; i < j; ++i) axpy(y[i], v[i], w);
      precond.apply(w, tmp);
      axpy(1.0, tmp, x);
    }
    rnorm = true_residual(v[0]);
    if (lucky && rnorm > target) {
      throw BreakdownError("gmres: Arnoldi breakdown at iteration " +
                           std::to_string(rep.iterations) + " before convergence");
    }
  }
  rep.converged = rnorm <= target;
  rep.final_relative_residual = rnorm / bnorm;
  if (!rep.residual_history.empty()) rep.residual_history.back() = rnorm;
  rep.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace

KrylovResult gmres(const LinearOperator& op, const LinearOperator& precond,
                   std::span<const double> b, const KrylovConfig& cfg, std::span<const double> x0) {
  return run_gmres(op, precond, b, cfg, x0, false);
}

KrylovResult fgmres(const LinearOperator& op, const LinearOperator& precond,
                    std::span<const double> b, const KrylovConfig& cfg, std::span<const double> x0) {
  return run_gmres(op, precond, b, cfg, x0, true);
}

void write_residual_csv(const std::string& path, const SolveReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "iter,residual\n";
  char buf[64];
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, report.residual_history[i]);
    out << buf;
  }
}

}  // namespace ocp

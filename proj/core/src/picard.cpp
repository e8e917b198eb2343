#include "ocp/picard.hpp"

#include <cstdio>
#include <memory>

#include "ocp/error.hpp"

namespace ocp {

namespace {

double residual_norm(const SaddleSystem& sys, std::span<const double> x) {
  Vector r = sys.op()->operator()(x);
  axpy(-1.0, sys.rhs(), r);
  return norm2(r);
}

std::span<const double> state_part(const SaddleSystem& sys, std::span<const double> x) {
  return x.subspan(0, sys.block_size());
}

}  // namespace

SaddleSystem build_kkt(const ControlProblem& p, const Mesh& mesh,
                       const std::optional<TimeGrid>& grid, TimeScheme scheme,
                       std::span<const double> state) {
  if (!grid || scheme == TimeScheme::stationary) return build_stationary_kkt(p, mesh, state);
  return build_instationary_kkt(p, mesh, *grid, scheme, state);
}

double nonlinear_residual(const ControlProblem& p, const Mesh& mesh,
                          const std::optional<TimeGrid>& grid, TimeScheme scheme,
                          std::span<const double> x) {
  const Index blocks = grid && scheme != TimeScheme::stationary ? grid->num_steps() : 1;
  const Index n = mesh.num_nodes() * blocks;
  if (static_cast<Index>(x.size()) != 2 * n) {
    throw DimensionError("nonlinear_residual: iterate has the wrong size");
  }
  const SaddleSystem sys = build_kkt(p, mesh, grid, scheme, x.subspan(0, n));
  return residual_norm(sys, x);
}

PicardResult picard_solve(const ControlProblem& p, const std::vector<Mesh>& meshes,
                          const std::optional<TimeGrid>& grid, TimeScheme scheme,
                          const PicardConfig& cfg) {
  if (cfg.max_iters < 1) throw ConfigError("picard_solve: max_iters must be at least 1");
  if (!(cfg.nl_rtol > 0.0 && cfg.nl_rtol < 1.0)) {
    throw ConfigError("picard_solve: nl_rtol must lie in (0, 1)");
  }
  if (meshes.empty()) throw ConfigError("picard_solve: empty mesh hierarchy");
  const Mesh& mesh = meshes.back();

  PicardResult out;
  auto sys = std::make_unique<SaddleSystem>(build_kkt(p, mesh, grid, scheme));
  out.x.assign(sys->size(), 0.0);
  const double r0 = norm2(sys->rhs());
  out.report.residual_history.push_back(r0);
  if (r0 == 0.0) {
    out.report.converged = true;
    out.solution = split_solution(*sys, out.x);
    return out;
  }

  for (int it = 1; it <= cfg.max_iters; ++it) {
    const auto prec = build_block_triangular(*sys, meshes, cfg.prec);
    const auto op = sys->op();
    const Vector b = sys->rhs();
    KrylovResult lin = prec->flexible() ? fgmres(*op, *prec, b, cfg.linear, out.x)
                                        : gmres(*op, *prec, b, cfg.linear, out.x);
    out.x = std::move(lin.x);
    out.report.linear_iterations.push_back(lin.report.iterations);
    out.report.iterations = it;

    auto next = std::make_unique<SaddleSystem>(
        build_kkt(p, mesh, grid, scheme, state_part(*sys, out.x)));
    const double r = residual_norm(*next, out.x);
    out.report.residual_history.push_back(r);
    sys = std::move(next);
    if (r <= cfg.nl_rtol * r0) {
      out.report.converged = true;
      break;
    }
  }
  out.solution = split_solution(*sys, out.x);
  return out;
}

void write_nonlinear_csv(const std::string& path, const PicardReport& report) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw IoError("cannot open " + path + " for writing");
  std::fprintf(f, "iter,residual\n");
  for (std::size_t i = 0; i < report.residual_history.size(); ++i) {
    std::fprintf(f, "%zu,%.17g\n", i, report.residual_history[i]);
  }
  if (std::fclose(f) != 0) throw IoError("failed writing " + path);
}

}  // namespace ocp

#include <benchmark/benchmark.h>

#include "ocp/krylov.hpp"
#include "ocp/multigrid.hpp"
#include "ocp/preconditioners.hpp"
#include "ocp/problems.hpp"

namespace {

using namespace ocp;

struct PoissonSetup {
  explicit PoissonSetup(int k) : np(poisson_control()), meshes(problem_meshes(np, k)) {
    sys = build_stationary_kkt(np.problem, meshes.back());
  }
  NamedProblem np;
  std::vector<Mesh> meshes;
  SaddleSystem sys;
};

Vector ramp(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 97);
  return v;
}

void BM_StiffnessSpmv(benchmark::State& state) {
  const PoissonSetup s(static_cast<int>(state.range(0)));
  const Vector x = ramp(s.sys.n_state);
  Vector y(x.size());
  for (auto _ : state) {
    s.sys.diag_blocks[0].multiply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * s.sys.diag_blocks[0].nnz());
}
BENCHMARK(BM_StiffnessSpmv)->DenseRange(5, 8);

void BM_VCycle(benchmark::State& state) {
  const PoissonSetup s(static_cast<int>(state.range(0)));
  const MgHierarchy mg(s.meshes, s.sys.diag_blocks[0]);
  const Vector b = ramp(s.sys.n_state);
  for (auto _ : state) {
    Vector x(b.size(), 0.0);
    mg.vcycle(b, x);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetComplexityN(s.sys.n_state);
}
BENCHMARK(BM_VCycle)->DenseRange(5, 8)->Complexity(benchmark::oN);

void BM_ChebyshevMass(benchmark::State& state) {
  const PoissonSetup s(static_cast<int>(state.range(0)));
  const ChebyshevJacobi cheb(s.sys.mass, {0.5, 2.0}, 20);
  const Vector b = ramp(s.sys.n_state);
  Vector x(b.size());
  for (auto _ : state) {
    cheb.apply(b, x);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_ChebyshevMass)->DenseRange(5, 8);

void BM_PreconditionerApply(benchmark::State& state) {
  const PoissonSetup s(static_cast<int>(state.range(0)));
  const auto prec = build_block_triangular(s.sys, s.meshes);
  const Vector r = ramp(s.sys.size());
  Vector z(r.size());
  for (auto _ : state) {
    prec->apply(r, z);
    benchmark::DoNotOptimize(z.data());
  }
  state.SetComplexityN(s.sys.size());
}
BENCHMARK(BM_PreconditionerApply)->DenseRange(5, 7)->Complexity(benchmark::oN);

void BM_PoissonSolve(benchmark::State& state) {
  const PoissonSetup s(static_cast<int>(state.range(0)));
  const auto prec = build_block_triangular(s.sys, s.meshes);
  const Vector b = s.sys.rhs();
  for (auto _ : state) {
    const KrylovResult r = gmres(*s.sys.op(), *prec, b);
    state.counters["iters"] = r.report.iterations;
  }
}
BENCHMARK(BM_PoissonSolve)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

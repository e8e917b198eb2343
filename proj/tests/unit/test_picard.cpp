#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ocp/picard.hpp"
#include "ocp/problems.hpp"
#include "oracles.hpp"

using namespace ocp;

namespace {

PicardConfig tight() {
  PicardConfig cfg;
  cfg.linear.rtol = 1e-12;
  cfg.linear.maxit = 2000;
  return cfg;
}

Vector newton_reference(const ControlProblem& p, const Mesh& mesh, const Vector& x0) {
  return test::dense_newton(
      [&](const Vector& x) {
        const Index n = static_cast<Index>(x.size()) / 2;
        const SaddleSystem sys = build_kkt(p, mesh, std::nullopt, TimeScheme::stationary,
                                           std::span<const double>(x.data(), n));
        Vector r = spmv(sys.assemble(), x);
        axpy(-1.0, sys.rhs(), r);
        return r;
      },
      x0, 1e-12);
}

}  // namespace

TEST(Picard, LinearProblemsTakeOneIteration) {
  for (const auto& name : problem_names()) {
    const auto np = make_problem(name);
    const auto meshes = problem_meshes(np, 3);
    std::optional<TimeGrid> grid;
    if (!np.stationary()) grid = TimeGrid(0.0, np.defaults.t_f, 5);
    const PicardResult r = picard_solve(np.problem, meshes, grid, np.defaults.scheme);
    EXPECT_TRUE(r.report.converged) << name;
    EXPECT_EQ(r.report.iterations, 1) << name;
    EXPECT_EQ(r.report.residual_history.size(), 2u);
    EXPECT_EQ(r.report.linear_iterations.size(), 1u);
  }
}

TEST(Picard, ZeroCoefficientMatchesLinearSolve) {
  const auto meshes = problem_meshes(poisson_control(), 3);
  const auto a = picard_solve(semilinear_poisson_control(0.0).problem, meshes, std::nullopt,
                              TimeScheme::stationary, tight());
  const auto b = picard_solve(poisson_control().problem, meshes, std::nullopt, TimeScheme::stationary, tight());
  EXPECT_EQ(a.report.iterations, 1);
  EXPECT_LE(relative_error(a.x, b.x), 1e-12);
}

TEST(Picard, SemilinearMatchesNewton) {
  const auto np = semilinear_poisson_control(0.1);
  const auto meshes = problem_meshes(np, 3);
  PicardConfig cfg = tight();
  const PicardResult r = picard_solve(np.problem, meshes, std::nullopt, TimeScheme::stationary, cfg);
  ASSERT_TRUE(r.report.converged);
  EXPECT_GT(r.report.iterations, 1);
  EXPECT_LE(r.report.iterations, 10);
  const auto& h = r.report.residual_history;
  EXPECT_LE(h.back(), 1e-5 * h.front());
  const Vector ref = newton_reference(np.problem, meshes.back(), r.x);
  EXPECT_LE(relative_error(r.x, ref), 1e-6);

  // A tighter nonlinear tolerance also pins down the recovered control.
  cfg.nl_rtol = 1e-11;
  cfg.max_iters = 30;
  const PicardResult fine = picard_solve(np.problem, meshes, std::nullopt, TimeScheme::stationary, cfg);
  const KktSolution ref_sol = split_solution(
      build_kkt(np.problem, meshes.back(), std::nullopt, TimeScheme::stationary, std::span<const double>(ref).first(ref.size() / 2)),
      ref);
  EXPECT_LE(relative_error(fine.solution.control, ref_sol.control), 1e-8);
}

TEST(Picard, ResidualDecreases) {
  const auto np = semilinear_poisson_control(1.0);
  const auto meshes = problem_meshes(np, 3);
  PicardConfig cfg = tight();
  cfg.nl_rtol = 1e-8;
  cfg.max_iters = 30;
  const PicardResult r = picard_solve(np.problem, meshes, std::nullopt, TimeScheme::stationary, cfg);
  ASSERT_TRUE(r.report.converged);
  const auto& h = r.report.residual_history;
  EXPECT_EQ(static_cast<int>(h.size()), r.report.iterations + 1);
  EXPECT_EQ(static_cast<int>(r.report.linear_iterations.size()), r.report.iterations);
  for (std::size_t i = 2; i < h.size(); ++i) EXPECT_LT(h[i], h[i - 1]);
  EXPECT_NEAR(nonlinear_residual(np.problem, meshes.back(), std::nullopt, TimeScheme::stationary, r.x), h.back(),
              1e-12 * h.front());
}

TEST(Picard, IterationCapReportsFailure) {
  const auto np = semilinear_poisson_control(1.0);
  const auto meshes = problem_meshes(np, 3);
  PicardConfig cfg = tight();
  cfg.max_iters = 1;
  const PicardResult r = picard_solve(np.problem, meshes, std::nullopt, TimeScheme::stationary, cfg);
  EXPECT_FALSE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
}

TEST(Picard, InvalidConfig) {
  const auto np = poisson_control();
  const auto meshes = problem_meshes(np, 2);
  PicardConfig cfg;
  cfg.max_iters = 0;
  EXPECT_THROW(picard_solve(np.problem, meshes, std::nullopt, TimeScheme::stationary, cfg), ConfigError);
  cfg = {};
  cfg.nl_rtol = 1.5;
  EXPECT_THROW(picard_solve(np.problem, meshes, std::nullopt, TimeScheme::stationary, cfg), ConfigError);
  EXPECT_THROW(picard_solve(np.problem, {}, std::nullopt, TimeScheme::stationary), ConfigError);
  EXPECT_THROW(nonlinear_residual(np.problem, meshes.back(), std::nullopt, TimeScheme::stationary, Vector(3)),
               DimensionError);
}

TEST(Picard, CsvOutput) {
  PicardReport rep;
  rep.residual_history = {1.0, 0.5};
  const auto path = std::filesystem::temp_directory_path() / "ocp_picard_test.csv";
  write_nonlinear_csv(path.string(), rep);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iter,residual");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
  std::filesystem::remove(path);
  EXPECT_THROW(write_nonlinear_csv("/nonexistent/dir/x.csv", rep), IoError);
}

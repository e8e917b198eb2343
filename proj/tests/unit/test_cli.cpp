#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ocp/error.hpp"
#include "ocp_cli/commands.hpp"
#include "ocp_cli/run_config.hpp"

using namespace ocp;
using namespace ocp::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ocp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& text, const std::string& name = "cfg.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  int run(const std::string& command, const std::string& config, const fs::path& out_dir,
          bool export_mm = false) {
    std::ostringstream out, err;
    const int rc = run_command(command, config, {out_dir.string(), export_mm}, out, err);
    stdout_ = out.str();
    stderr_ = err.str();
    return rc;
  }

  static std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> v;
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
  }

  fs::path dir_;
  std::string stdout_, stderr_;
};

const char* kHeader = "problem,k,beta,n_t,scheme,iters,converged,setup_s,solve_s";

/// Row without the two trailing timing columns.
std::string strip_timings(const std::string& row) {
  auto pos = row.rfind(',');
  pos = row.rfind(',', pos - 1);
  return row.substr(0, pos);
}

}  // namespace

TEST(RunConfig, ParsesDefaultsAndLists) {
  const RunConfig c = parse_run_config(R"({"problem": "poisson", "k": [3, 4], "beta": 1e-2})");
  EXPECT_EQ(c.problem, "poisson");
  EXPECT_EQ(c.k, (std::vector<int>{3, 4}));
  EXPECT_EQ(c.beta, (std::vector<double>{1e-2}));
  EXPECT_EQ(c.solver.rtol, 1e-6);
  EXPECT_EQ(c.solver.restart, 10);
  EXPECT_EQ(c.prec.cheb_sweeps, 20);
  EXPECT_EQ(c.prec.mg_cycles, 2);
  EXPECT_FALSE(c.n_t.has_value());
}

TEST(RunConfig, RejectsBadInput) {
  for (const char* text : {
           R"({"problem": "poisson", "k": 3, "colour": 1})",
           R"({"problem": "poisson", "k": 3, "solver": {"tol": 1e-6}})",
           R"({"problem": "poisson", "k": 3, "prec": {"sweeps": 3}})",
           R"({"problem": "poisson", "k": 0})",
           R"({"problem": "poisson", "k": 13})",
           R"({"problem": "poisson", "k": 3, "beta": 0})",
           R"({"problem": "poisson", "k": 3, "beta": -1})",
           R"({"problem": "poisson", "k": 3, "n_t": 1})",
           R"({"problem": "poisson", "k": 3, "solver": {"rtol": 1.0}})",
           R"({"problem": "poisson", "k": 3, "solver": {"restart": 0}})",
           R"({"problem": "poisson", "k": 3, "prec": {"cheb_sweeps": 0}})",
           R"({"problem": "poisson", "k": 3, "scheme": "leapfrog"})",
           R"({"problem": "poisson", "k": 2.5})",
           R"({"problem": "poisson", "k": []})",
           R"({"k": 3})",
           R"({"problem": "poisson", "k": 3,)",
           R"([1, 2])",
       }) {
    EXPECT_THROW(parse_run_config(text), ConfigError) << text;
  }
}

TEST_F(CliTest, SolveWritesReportAndResiduals) {
  const auto cfg = write_config(R"({"problem": "poisson", "k": 3, "beta": 1e-4})");
  ASSERT_EQ(run("solve", cfg, dir_ / "out"), kConverged) << stderr_;
  const auto report = lines(dir_ / "out" / "report.csv");
  ASSERT_EQ(report.size(), 2u);
  EXPECT_EQ(report[0], kHeader);
  EXPECT_EQ(report[1].substr(0, 30), "poisson,3,0.0001,1,stationary,");
  const auto res = lines(dir_ / "out" / "residuals_poisson_k3_beta1e-04.csv");
  ASSERT_GE(res.size(), 3u);
  EXPECT_EQ(res[0], "iter,residual");
}

TEST_F(CliTest, ReportIsByteStableExceptTimings) {
  const auto cfg = write_config(R"({"problem": "heat", "k": 3, "beta": [1e-2, 1e-4], "n_t": 5})");
  ASSERT_EQ(run("bench", cfg, dir_ / "a"), kConverged) << stderr_;
  ASSERT_EQ(run("bench", cfg, dir_ / "b"), kConverged) << stderr_;
  const auto a = lines(dir_ / "a" / "report.csv"), b = lines(dir_ / "b" / "report.csv");
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_EQ(strip_timings(a[i]), strip_timings(b[i]));
  for (const auto& name : {"residuals_heat_k3_beta1e-02.csv", "residuals_heat_k3_beta1e-04.csv"}) {
    EXPECT_EQ(lines(dir_ / "a" / name), lines(dir_ / "b" / name)) << name;
  }
}

TEST_F(CliTest, BenchSweepsInOrder) {
  const auto cfg = write_config(R"({"problem": "poisson", "k": [2, 3], "beta": [1, 1e-4]})");
  ASSERT_EQ(run("bench", cfg, dir_ / "out"), kConverged) << stderr_;
  const auto report = lines(dir_ / "out" / "report.csv");
  ASSERT_EQ(report.size(), 5u);
  EXPECT_EQ(report[1].substr(0, 12), "poisson,2,1,");
  EXPECT_EQ(report[2].substr(0, 17), "poisson,2,0.0001,");
  EXPECT_EQ(report[3].substr(0, 12), "poisson,3,1,");
  EXPECT_EQ(report[4].substr(0, 17), "poisson,3,0.0001,");
  EXPECT_NE(stdout_.find("it"), std::string::npos);
}

TEST_F(CliTest, NotConvergedExitCode) {
  const auto cfg = write_config(R"({"problem": "poisson", "k": 4, "beta": 1e-4, "solver": {"maxit": 1}})");
  EXPECT_EQ(run("solve", cfg, dir_ / "out"), kNotConverged);
  const auto report = lines(dir_ / "out" / "report.csv");
  ASSERT_EQ(report.size(), 2u);
  EXPECT_NE(report[1].find(",false,"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsWriteNothing) {
  for (const char* text : {
           R"({"problem": "poisson", "k": 3, "extra": true})",
           R"({"problem": "stokes", "k": 3})",
           R"({"problem": "poisson", "k": [2, 3]})",
           R"({"problem": "poisson", "k": 3, "n_t": 5})",
           R"({"problem": "heat", "k": 3, "scheme": "stationary"})",
           R"({"problem": "poisson", "k": 3, "wind": "zero"})",
           R"({"problem": "convdiff", "k": 3, "wind": "gale"})",
           R"(not json)",
       }) {
    const auto cfg = write_config(text);
    EXPECT_EQ(run("solve", cfg, dir_ / "out"), kConfigError) << text;
    EXPECT_FALSE(fs::exists(dir_ / "out")) << text;
    EXPECT_FALSE(stderr_.empty());
  }
  EXPECT_EQ(run("solve", (dir_ / "missing.json").string(), dir_ / "out"), kConfigError);
}

TEST_F(CliTest, ExportMatrixMarket) {
  const auto cfg = write_config(R"({"problem": "poisson", "k": 2, "beta": 1e-2})");
  ASSERT_EQ(run("solve", cfg, dir_ / "out", true), kConverged) << stderr_;
  for (const char* suffix : {"_A.mtx", "_B2.mtx", "_B1t.mtx", "_C.mtx", "_rhs_v.txt", "_rhs_zeta.txt"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / ("poisson_k2_beta1e-02" + std::string(suffix)))) << suffix;
  }
}

TEST_F(CliTest, EigcheckWithinBounds) {
  const auto cfg = write_config(R"({"problem": "heat", "k": 2, "beta": [1, 1e-4], "n_t": 3, "scheme": "backward_euler"})");
  EXPECT_EQ(run("eigcheck", cfg, dir_ / "out"), kConverged) << stderr_;
  EXPECT_NE(stdout_.find("min"), std::string::npos);
  const auto big = write_config(R"({"problem": "poisson", "k": 5, "beta": 1})", "big.json");
  EXPECT_EQ(run("eigcheck", big, dir_ / "out2"), kConfigError);
}

TEST_F(CliTest, BinaryExitCodes) {
  const std::string exe = OCP_CLI_PATH;
  const auto good = write_config(R"({"problem": "poisson", "k": 2, "beta": 1e-2})");
  const auto bad = write_config(R"({"problem": "poisson"})", "bad.json");
  auto sh = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  EXPECT_EQ(sh("solve --config " + good + " --out-dir " + (dir_ / "o1").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "o1" / "report.csv"));
  EXPECT_EQ(sh("solve --config " + bad + " --out-dir " + (dir_ / "o2").string()), 1);
  EXPECT_EQ(sh("solve"), 1);
  EXPECT_EQ(sh("frobnicate --config " + good), 1);
}

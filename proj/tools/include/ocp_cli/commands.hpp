#pragma once

#include <iosfwd>
#include <string>

#include "ocp_cli/run_config.hpp"

namespace ocp::cli {

struct CommandOptions {
  std::string out_dir;  // overrides config output.dir when non-empty
  bool export_mm = false;
};

enum ExitCode : int { kConverged = 0, kConfigError = 1, kNotConverged = 2 };

/// One linear solve. Writes report.csv and residuals_<cell>.csv.
int cmd_solve(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
              std::ostream& err);

/// Cartesian sweep over k and beta; report.csv plus an aligned table on `out`.
int cmd_bench(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
              std::ostream& err);

/// Dense spectrum of S_hat^{-1} S; exit 0 iff inside [0.5 - 1e-6, 1 + 1e-6].
int cmd_eigcheck(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
                 std::ostream& err);

/// Loads the config file and dispatches; configuration errors map to exit 1.
int run_command(const std::string& command, const std::string& config_path,
                const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace ocp::cli

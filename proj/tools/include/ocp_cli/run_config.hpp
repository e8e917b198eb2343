#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ocp/kkt.hpp"

namespace ocp::cli {

struct SolverSection {
  double rtol = 1e-6;
  int restart = 10;
  int maxit = 1000;
};

struct PrecSection {
  int cheb_sweeps = 20;
  int mg_cycles = 2;
  bool exact_inner = false;
};

struct OutputSection {
  std::string dir = "results";
  bool residuals = true;
};

/// One JSON document. `k` and `beta` accept a number or a list (lists are
/// swept by `bench`); everything else is scalar.
struct RunConfig {
  std::string problem;
  std::vector<int> k;
  std::vector<double> beta;
  std::optional<int> n_t;
  std::optional<TimeScheme> scheme;
  std::optional<double> t_f;
  std::optional<double> diffusivity;
  std::optional<std::string> wind;
  SolverSection solver;
  PrecSection prec;
  OutputSection output;
};

/// Throws ConfigError on malformed JSON, unknown keys or out-of-range values.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

}  // namespace ocp::cli

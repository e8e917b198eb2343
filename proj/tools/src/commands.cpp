#include "ocp_cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "ocp/error.hpp"
#include "ocp/krylov.hpp"
#include "ocp/matrix_market.hpp"
#include "ocp/picard.hpp"
#include "ocp/preconditioners.hpp"
#include "ocp/problems.hpp"

namespace ocp::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr const char* kReportHeader = "problem,k,beta,n_t,scheme,iters,converged,setup_s,solve_s";
constexpr Index kEigcheckMaxSize = 1000;

struct Cell {
  NamedProblem np;
  int k = 0;
  double beta = 0.0;
  TimeScheme scheme = TimeScheme::stationary;
  std::optional<TimeGrid> grid;

  int n_t() const { return grid ? grid->n_t : 1; }
  Index node_count() const {
    const Index n = (Index{1} << k) + 1;
    return n * n;
  }
  Index system_size() const { return 2 * node_count() * (grid ? grid->num_steps() : 1); }
  std::string label() const {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s_k%d_beta%.0e", np.name.c_str(), k, beta);
    return buf;
  }
};

struct CellResult {
  int iterations = 0;
  bool converged = false;
  double setup_s = 0.0;
  double solve_s = 0.0;
  SolveReport report;
};

Cell make_cell(const RunConfig& cfg, int k, double beta) {
  const bool is_convdiff = cfg.problem == "convdiff";
  if (!is_convdiff && (cfg.diffusivity || cfg.wind)) {
    throw ConfigError("'diffusivity' and 'wind' apply to the convdiff problem only");
  }
  Cell c;
  c.k = k;
  c.beta = beta;
  if (is_convdiff) {
    const bool stationary = !cfg.scheme || *cfg.scheme == TimeScheme::stationary;
    c.np = convdiff_control(cfg.wind.value_or("recirculating"), cfg.diffusivity.value_or(0.1),
                            stationary, beta);
  } else {
    c.np = make_problem(cfg.problem);
  }
  c.np.problem.beta = beta;
  c.scheme = cfg.scheme.value_or(c.np.defaults.scheme);
  if (c.np.stationary() && c.scheme != TimeScheme::stationary) {
    throw ConfigError("problem '" + c.np.name + "' is stationary; scheme must be 'stationary'");
  }
  if (!c.np.stationary() && c.scheme == TimeScheme::stationary) {
    throw ConfigError("problem '" + c.np.name + "' is time dependent; choose backward_euler or trapezoidal");
  }
  if (c.scheme != TimeScheme::stationary) {
    c.grid = TimeGrid(0.0, cfg.t_f.value_or(c.np.defaults.t_f), cfg.n_t.value_or(c.np.defaults.n_t));
  } else if (cfg.n_t || cfg.t_f) {
    throw ConfigError("'n_t' and 't_f' apply to time-dependent problems only");
  }
  if (cfg.prec.exact_inner && c.node_count() > static_cast<Index>(DenseLU::kMaxDimension)) {
    throw ConfigError("exact_inner needs k <= 6 (dense block solves)");
  }
  return c;
}

std::vector<Cell> make_cells(const RunConfig& cfg) {
  std::vector<double> betas = cfg.beta;
  if (betas.empty()) betas.push_back(make_problem(cfg.problem).defaults.beta);
  std::vector<Cell> cells;
  for (int k : cfg.k)
    for (double b : betas) cells.push_back(make_cell(cfg, k, b));
  return cells;
}

PrecOptions prec_options(const RunConfig& cfg) {
  PrecOptions o;
  o.cheb_sweeps = cfg.prec.cheb_sweeps;
  o.mg.cycles = cfg.prec.mg_cycles;
  o.exact_inner = cfg.prec.exact_inner;
  return o;
}

void export_system(const SaddleSystem& sys, const fs::path& dir, const std::string& prefix) {
  write_matrix_market((dir / (prefix + "_A.mtx")).string(), sys.A);
  write_matrix_market((dir / (prefix + "_B2.mtx")).string(), sys.B2);
  write_matrix_market((dir / (prefix + "_B1t.mtx")).string(), sys.B1t);
  write_matrix_market((dir / (prefix + "_C.mtx")).string(), sys.C);
  write_vector((dir / (prefix + "_rhs_v.txt")).string(), sys.rhs_v);
  write_vector((dir / (prefix + "_rhs_zeta.txt")).string(), sys.rhs_zeta);
}

CellResult run_cell(const Cell& c, const RunConfig& cfg, const CommandOptions& opts,
                    const fs::path& dir) {
  CellResult r;
  const auto t0 = Clock::now();
  const auto meshes = problem_meshes(c.np, c.k);
  const SaddleSystem sys = build_kkt(c.np.problem, meshes.back(), c.grid, c.scheme);
  const auto prec = build_block_triangular(sys, meshes, prec_options(cfg));
  const auto op = sys.op();
  const Vector b = sys.rhs();
  const auto t1 = Clock::now();
  const KrylovConfig kc{cfg.solver.rtol, cfg.solver.restart, cfg.solver.maxit};
  KrylovResult res = prec->flexible() ? fgmres(*op, *prec, b, kc) : gmres(*op, *prec, b, kc);
  const auto t2 = Clock::now();
  r.setup_s = std::chrono::duration<double>(t1 - t0).count();
  r.solve_s = std::chrono::duration<double>(t2 - t1).count();
  r.iterations = res.report.iterations;
  r.converged = res.report.converged;
  r.report = std::move(res.report);
  if (opts.export_mm) export_system(sys, dir, c.label());
  return r;
}

std::string report_row(const Cell& c, const CellResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%d,%.6g,%d,%s,%d,%s,%.6f,%.6f", c.np.name.c_str(), c.k, c.beta,
                c.n_t(), to_string(c.scheme).c_str(), r.iterations, r.converged ? "true" : "false",
                r.setup_s, r.solve_s);
  return buf;
}

fs::path output_dir(const RunConfig& cfg, const CommandOptions& opts) {
  fs::path dir = opts.out_dir.empty() ? fs::path(cfg.output.dir) : fs::path(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_lines(const fs::path& path, const std::vector<std::string>& lines) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  for (const auto& l : lines) f << l << '\n';
  if (!f) throw IoError("failed writing " + path.string());
}

void print_table(std::ostream& out, const std::vector<Cell>& cells,
                 const std::vector<CellResult>& results, const RunConfig& cfg) {
  std::vector<double> betas;
  for (const auto& c : cells)
    if (std::find(betas.begin(), betas.end(), c.beta) == betas.end()) betas.push_back(c.beta);
  char buf[256];
  out << cells.front().np.name << ": GMRES iterations (it) and solve time in seconds (CPU)\n";
  std::string head = "   k |";
  std::string sub = "     |";
  for (double b : betas) {
    std::snprintf(buf, sizeof buf, "  beta=%-9.0e |", b);
    head += buf;
    sub += "   it      CPU   |";
  }
  out << head << '\n' << sub << '\n';
  out << std::string(head.size(), '-') << '\n';
  std::size_t idx = 0;
  for (int k : cfg.k) {
    std::snprintf(buf, sizeof buf, "%4d |", k);
    std::string line = buf;
    for (std::size_t j = 0; j < betas.size(); ++j, ++idx) {
      const auto& r = results[idx];
      std::snprintf(buf, sizeof buf, " %4d%s %8.3f  |", r.iterations, r.converged ? " " : "*",
                    r.solve_s);
      line += buf;
    }
    out << line << '\n';
  }
  out << "(* = not converged)\n";
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
              std::ostream& err) {
  if (cfg.k.size() != 1 || cfg.beta.size() > 1) {
    throw ConfigError("solve takes a single 'k' and 'beta'; use bench for sweeps");
  }
  const std::vector<Cell> cells = make_cells(cfg);
  const Cell& c = cells.front();
  const fs::path dir = output_dir(cfg, opts);
  CellResult r;
  try {
    r = run_cell(c, cfg, opts, dir);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    err << "solve failed: " << e.what() << '\n';
  }
  write_lines(dir / "report.csv", {kReportHeader, report_row(c, r)});
  if (cfg.output.residuals) {
    write_residual_csv((dir / ("residuals_" + c.label() + ".csv")).string(), r.report);
  }
  out << c.label() << ": " << (r.converged ? "converged" : "NOT converged") << " in "
      << r.iterations << " iterations (setup " << r.setup_s << " s, solve " << r.solve_s << " s)\n";
  return r.converged ? kConverged : kNotConverged;
}

int cmd_bench(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
              std::ostream& err) {
  const std::vector<Cell> cells = make_cells(cfg);
  const fs::path dir = output_dir(cfg, opts);
  std::vector<CellResult> results;
  std::vector<std::string> rows{kReportHeader};
  for (const auto& c : cells) {
    CellResult r;
    try {
      r = run_cell(c, cfg, opts, dir);
    } catch (const Error& e) {
      err << c.label() << " failed: " << e.what() << '\n';
    }
    if (cfg.output.residuals) {
      write_residual_csv((dir / ("residuals_" + c.label() + ".csv")).string(), r.report);
    }
    rows.push_back(report_row(c, r));
    results.push_back(std::move(r));
  }
  write_lines(dir / "report.csv", rows);
  print_table(out, cells, results, cfg);
  return kConverged;
}

int cmd_eigcheck(const RunConfig& cfg, const CommandOptions& opts, std::ostream& out,
                 std::ostream&) {
  const std::vector<Cell> cells = make_cells(cfg);
  for (const auto& c : cells) {
    if (c.system_size() > kEigcheckMaxSize) {
      throw DimensionError("eigcheck: " + c.label() + " has total dimension " +
                           std::to_string(c.system_size()) + " > 1000");
    }
  }
  const fs::path dir = opts.export_mm ? output_dir(cfg, opts) : fs::path{};
  bool all_inside = true;
  char buf[256];
  for (const auto& c : cells) {
    const auto mesh = build_rect_mesh(Index{1} << c.k, Index{1} << c.k, c.np.domain);
    const SaddleSystem sys = build_kkt(c.np.problem, mesh, c.grid, c.scheme);
    if (opts.export_mm) export_system(sys, dir, c.label());
    const Vector ev = schur_spectrum(sys);
    const bool inside = ev.front() >= 0.5 - 1e-6 && ev.back() <= 1.0 + 1e-6;
    all_inside = all_inside && inside;
    std::snprintf(buf, sizeof buf, "%s scheme=%s n_t=%d: min %.12f max %.12f %s\n",
                  c.label().c_str(), to_string(c.scheme).c_str(), c.n_t(), ev.front(), ev.back(),
                  inside ? "inside [0.5, 1]" : "OUTSIDE [0.5, 1]");
    out << buf;
  }
  return all_inside ? kConverged : kNotConverged;
}

int run_command(const std::string& command, const std::string& config_path,
                const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = load_run_config(config_path);
    if (command == "solve") return cmd_solve(cfg, opts, out, err);
    if (command == "bench") return cmd_bench(cfg, opts, out, err);
    if (command == "eigcheck") return cmd_eigcheck(cfg, opts, out, err);
    throw ConfigError("unknown command '" + command + "' (choices: solve, bench, eigcheck)");
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const DimensionError& e) {
    err << "configuration error: " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
  }
  return kConfigError;
}

}  // namespace ocp::cli

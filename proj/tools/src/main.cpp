#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ocp_cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Saddle-point solvers for distributed optimal control"};
  app.require_subcommand(1);

  std::string config;
  ocp::cli::CommandOptions opts;
  for (const char* name : {"solve", "bench", "eigcheck"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out-dir", opts.out_dir, "Output directory (overrides output.dir)");
    sub->add_flag("--export-mm", opts.export_mm, "Dump system blocks in Matrix Market format");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ocp::cli::kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return ocp::cli::run_command(command, config, opts, std::cout, std::cerr);
}

#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"gvf-lab: inverse-kinematics guiding vector field simulator"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Simulate a scenario and write trace.csv + summary.txt");
  run->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--out,-o", out_dir, "Output directory")->required();

  auto* validate = app.add_subcommand("validate", "Check a scenario file without simulating");
  validate->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string param;
  std::string values;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario once per parameter value");
  sweep->add_option("config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--param", param, "Dotted key, e.g. gains.k_theta")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out,-o", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gvf::cli::kConfigError;
  }

  if (*run) return gvf::cli::cmd_run(config, out_dir, std::cout, std::cerr);
  if (*validate) return gvf::cli::cmd_validate(config, std::cout, std::cerr);
  return gvf::cli::cmd_sweep(config, param, gvf::cli::split_values(values), out_dir, std::cout,
                             std::cerr);
}

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gvf::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kSimulationError = 2 };

/// Simulates the scenario and writes <out_dir>/trace.csv and summary.txt.
int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out,
            std::ostream& err);

/// Parses and checks the scenario without simulating.
int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err);

/// One run per value of `param` (a dotted key). Writes per-run directories
/// and <out_dir>/aggregate.csv.
int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir,
              std::ostream& out, std::ostream& err);

/// Splits "0.2,0.4,0.6" into its entries.
std::vector<std::string> split_values(const std::string& list);

/// Worker count for sweeps: GVF_LAB_THREADS when set and positive, else the
/// hardware concurrency, never more than `jobs`.
unsigned sweep_threads(std::size_t jobs);

}  // namespace gvf::cli

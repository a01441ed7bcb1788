#include "commands.hpp"

#include "gvf/report.hpp"
#include "gvf/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace gvf::cli {

namespace fs = std::filesystem;

namespace {

std::optional<double> radius_of(const Scenario& sc) {
  if (sc.path_kind == PathKind::kCircle || sc.path_kind == PathKind::kCylinderPlane) {
    return sc.path_radius;
  }
  return std::nullopt;
}

struct RunOutcome {
  int code = kOk;
  std::string message;
  TraceSummary summary;
};

RunOutcome run_scenario(const Scenario& sc, const fs::path& out_dir) {
  RunOutcome outcome;
  Trace trace;
  try {
    trace = simulate(sc.config);
  } catch (const SimulationError& e) {
    outcome.code = kSimulationError;
    outcome.message = e.what();
    return outcome;
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream csv(out_dir / "trace.csv");
  std::ofstream summary(out_dir / "summary.txt");
  if (ec || !csv || !summary) {
    outcome.code = kConfigError;
    outcome.message = "cannot write to output directory '" + out_dir.string() + "'";
    return outcome;
  }
  write_trace_csv(trace, csv);
  outcome.summary = summarize(trace, radius_of(sc));
  write_summary(outcome.summary, summary);
  return outcome;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-' && c != '_') c = '_';
  }
  return out;
}

}  // namespace

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

unsigned sweep_threads(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GVF_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::ostream& out,
            std::ostream& err) {
  Scenario sc;
  try {
    sc = load_scenario_file(config_path);
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }
  const RunOutcome outcome = run_scenario(sc, out_dir);
  if (outcome.code != kOk) {
    err << outcome.message << '\n';
    return outcome.code;
  }
  out << "wrote " << (fs::path(out_dir) / "trace.csv").string() << '\n';
  write_summary(outcome.summary, out);
  return kOk;
}

int cmd_validate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = load_scenario_file(config_path);
    for (const auto& w : validate_scenario(sc)) err << w << '\n';
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }
  out << config_path << ": valid\n";
  return kOk;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir,
              std::ostream& out, std::ostream& err) {
  if (values.empty()) {
    err << "sweep: no values given\n";
    return kConfigError;
  }
  IniDocument base;
  std::vector<Scenario> scenarios;
  try {
    base = IniDocument::parse(read_text_file(config_path));
    load_scenario(base);
    for (const auto& v : values) {
      IniDocument doc = base;
      doc.set(param, v);
      scenarios.push_back(load_scenario(doc));
    }
  } catch (const ConfigError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }

  std::vector<RunOutcome> outcomes(values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      const fs::path dir = fs::path(out_dir) / (sanitize(param) + "=" + sanitize(values[i]));
      outcomes[i] = run_scenario(scenarios[i], dir);
    }
  };
  const unsigned n_threads = sweep_threads(scenarios.size());
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream agg(fs::path(out_dir) / "aggregate.csv");
  if (ec || !agg) {
    err << "cannot write to output directory '" << out_dir << "'\n";
    return kConfigError;
  }
  agg << std::setprecision(12);
  agg << "value,settling_time,max_abs_phi,final_v,status\n";
  int code = kOk;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const RunOutcome& o = outcomes[i];
    agg << values[i] << ',';
    if (o.code != kOk) {
      agg << "nan,nan,nan,failed\n";
      err << param << "=" << values[i] << ": " << o.message << '\n';
      code = std::max(code, o.code);
      continue;
    }
    if (o.summary.settling_time) {
      agg << *o.summary.settling_time;
    } else {
      agg << "nan";
    }
    agg << ',' << o.summary.max_abs_phi_steady << ',' << o.summary.final_lyapunov << ",ok\n";
  }
  out << "wrote " << (fs::path(out_dir) / "aggregate.csv").string() << " (" << values.size()
      << " runs, " << n_threads << " threads)\n";
  return code;
}

}  // namespace gvf::cli

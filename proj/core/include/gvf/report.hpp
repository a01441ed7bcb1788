#pragma once

#include "gvf/simulation.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gvf {

/// |phi| threshold used for settling time.
inline constexpr double kSettlingThreshold = 0.01;

/// Column names for a trace. Depends only on vehicle kind, dimension and
/// whether a behavior signal is present.
std::vector<std::string> trace_columns(const Trace& trace);

/// Comma-separated, header row first, 15 significant digits.
void write_trace_csv(const Trace& trace, std::ostream& out);

struct TraceSummary {
  double final_phi_norm = 0.0;
  double max_overshoot = 0.0;
  std::optional<double> settling_time;  // absent if |phi| never stays below threshold
  double steady_state_error = 0.0;       // max |phi - gamma| over the last quarter
  std::optional<double> steady_state_radial_error;  // metres, circular paths
  double max_abs_phi_steady = 0.0;       // max |phi| over the last quarter
  double final_lyapunov = 0.0;
  double min_ground_speed = 0.0;
  double max_ground_speed = 0.0;
  bool any_saturated = false;
};

/// `radius` enables the radial-distance equivalents for circular paths.
TraceSummary summarize(const Trace& trace, std::optional<double> radius = std::nullopt);

void write_summary(const TraceSummary& summary, std::ostream& out);

}  // namespace gvf

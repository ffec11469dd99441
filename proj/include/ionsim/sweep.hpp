#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ionsim/config.hpp"
#include "ionsim/pulse.hpp"

namespace ionsim {

struct GridPoint {
  int n = 2;
  double delta_min = 0.0;  // rad/s
  double tau = 0.0;        // s
};

struct PointResult {
  GridPoint point;
  bool ok = false;
  std::string error;
  double omega_max = 0.0;
  double infid_sim = 0.0;
  double bound_simple = 0.0;
  double bound_improved = 0.0;
  double bound_loose = 0.0;
  double estimator = 0.0;
  double diag_a = 0.0;
  double infid_drift_pert = 0.0;
  double infid_drift_exact = 0.0;
  double runtime_s = 0.0;
};

// Sorted (N, delta_min, tau) grid from the config's sweep lists.
std::vector<GridPoint> expand_grid(const RunConfig& cfg);

// Simulation + bounds + drift for one grid point.  Numerical errors are
// captured into the result instead of escaping.
PointResult run_point(const RunConfig& cfg, const GridPoint& point, bool parallel_kernel);

// Pulse CSV: header tau_s,mu_rad_s,n_segments; a row with those values; then
// one amplitude per row.  min_omega converts between mu and delta_min.
void write_pulse_csv(const std::string& path, const Pulse& pulse, double min_omega);
Pulse read_pulse_csv(const std::string& path, double min_omega);
std::string pulse_filename(const GridPoint& point);

// CLI subcommands; return the process exit code (0 ok, 1 config, 2 numerical).
int cmd_modes(const RunConfig& cfg);
int cmd_optimize(const RunConfig& cfg, int jobs);
int cmd_simulate(const RunConfig& cfg, const std::optional<std::string>& pulse_file);
int cmd_bounds(const RunConfig& cfg, const std::optional<std::string>& pulse_file);
int cmd_drift(const RunConfig& cfg, const std::optional<std::string>& pulse_file);
int cmd_sweep(const RunConfig& cfg, int jobs);
int cmd_trajectory(const RunConfig& cfg, const std::string& pulse_file);
int cmd_bench(const RunConfig& cfg);

}  // namespace ionsim

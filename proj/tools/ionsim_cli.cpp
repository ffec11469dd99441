#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ionsim/config.hpp"
#include "ionsim/errors.hpp"
#include "ionsim/sweep.hpp"

int main(int argc, char** argv) {
  CLI::App app{"trapped-ion entangling-gate simulator: noisy two-qubit gates on "
               "N-ion chains, robust pulse synthesis, and analytic error bounds"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int jobs = 0;
  bool plots = false;
  app.add_option("--config", config_path, "run configuration file")->required();
  app.add_option("--out", out_dir, "output directory (overrides [output] dir)");
  app.add_option("--jobs", jobs, "worker count for sweeps (default: all cores)");
  app.add_flag("--plots", plots, "emit SVG plots");

  std::optional<std::string> pulse_file;
  std::string trajectory_pulse;

  auto* modes = app.add_subcommand("modes", "compute normal modes, write modes.csv");
  auto* optimize =
      app.add_subcommand("optimize", "synthesize pulses over the sweep grid");
  auto* simulate = app.add_subcommand("simulate", "run the noisy gate simulation");
  auto* bounds = app.add_subcommand("bounds", "evaluate the analytic error bounds");
  auto* drift = app.add_subcommand("drift", "quasi-static drift infidelities");
  auto* sweep = app.add_subcommand("sweep", "grid sweep: simulation + bounds + drift");
  auto* trajectory =
      app.add_subcommand("trajectory", "sample phase-space trajectories of a pulse");
  auto* bench = app.add_subcommand("bench", "time the sequential simulation vs N");

  std::string opt_pulse;
  simulate->add_option("--pulse", opt_pulse, "pulse CSV (default: synthesize)");
  bounds->add_option("--pulse", opt_pulse, "pulse CSV (default: synthesize)");
  drift->add_option("--pulse", opt_pulse, "pulse CSV (default: synthesize)");
  trajectory->add_option("--pulse", trajectory_pulse, "pulse CSV")->required();

  CLI11_PARSE(app, argc, argv);

  ionsim::RunConfig cfg;
  try {
    cfg = ionsim::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (plots) cfg.plots = true;
  if (!opt_pulse.empty()) pulse_file = opt_pulse;

  if (modes->parsed()) return ionsim::cmd_modes(cfg);
  if (optimize->parsed()) return ionsim::cmd_optimize(cfg, jobs);
  if (simulate->parsed()) return ionsim::cmd_simulate(cfg, pulse_file);
  if (bounds->parsed()) return ionsim::cmd_bounds(cfg, pulse_file);
  if (drift->parsed()) return ionsim::cmd_drift(cfg, pulse_file);
  if (sweep->parsed()) return ionsim::cmd_sweep(cfg, jobs);
  if (trajectory->parsed()) return ionsim::cmd_trajectory(cfg, trajectory_pulse);
  if (bench->parsed()) return ionsim::cmd_bench(cfg);
  return 1;
}

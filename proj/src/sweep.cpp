#include "ionsim/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ionsim/bounds.hpp"
#include "ionsim/csv.hpp"
#include "ionsim/errors.hpp"
#include "ionsim/fit.hpp"
#include "ionsim/master.hpp"
#include "ionsim/svg.hpp"

namespace ionsim {

namespace fs = std::filesystem;

namespace {

double wall_seconds() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return (fs::path(cfg.output_dir) / name).string();
}

int run_command(const char* what, const std::function<void()>& body);

}  // namespace

std::vector<GridPoint> expand_grid(const RunConfig& cfg) {
  std::vector<GridPoint> grid;
  std::vector<int> ns = cfg.sweep_n;
  std::vector<double> deltas = cfg.sweep_delta_min_hz;
  std::vector<double> taus = cfg.sweep_tau_us;
  std::sort(ns.begin(), ns.end());
  std::sort(deltas.begin(), deltas.end());
  std::sort(taus.begin(), taus.end());
  for (int n : ns) {
    for (double d : deltas) {
      for (double t : taus) {
        grid.push_back({n, kTwoPi * d, t * 1e-6});
      }
    }
  }
  return grid;
}

PointResult run_point(const RunConfig& cfg, const GridPoint& point, bool parallel_kernel) {
  PointResult res;
  res.point = point;
  try {
    const TrapConfig trap = cfg.trap_for(point.n);
    trap.validate_gate_ions();
    const IonChain chain = make_chain(trap);
    const auto [ja, jb] = trap.gate_ions;
    const Pulse pulse = optimize_amplitudes(chain, ja, jb, point.tau, point.delta_min,
                                            cfg.segments_for(point.n));
    res.omega_max = pulse.max_amplitude();
    const NoiseModel noise = cfg.noise_for(point.n);

    SimConfig sim = cfg.sim;
    sim.parallel_kernel = parallel_kernel;
    const SpinState rho0 = SpinState::ket00();
    const double t0 = wall_seconds();
    const SpinState noisy = sequential_simulate(rho0, chain, pulse, noise, ja, jb, sim);
    res.runtime_s = wall_seconds() - t0;
    const SpinState ideal = analytic_final_state(rho0, chain, pulse, ja, jb,
                                                 sim.initial_nbar);
    res.infid_sim = 1.0 - fidelity(noisy, ideal);

    const ErrorReport report = make_report(pulse, chain, noise, ja, jb, res.infid_sim);
    res.bound_simple = report.simple_bound;
    res.bound_improved = report.improved_bound;
    res.bound_loose = report.loose_bound;
    res.estimator = report.heating_estimator;
    res.diag_a = report.trajectory_diag_a;
    res.infid_drift_pert = freq_drift_delta(pulse, chain, ja, jb, cfg.drift.xi_omega);
    res.infid_drift_exact = freq_drift_exact(pulse, chain, ja, jb, cfg.drift.xi_omega);
    res.ok = true;
  } catch (const std::exception& e) {
    res.ok = false;
    res.error = e.what();
  }
  return res;
}

std::string pulse_filename(const GridPoint& point) {
  const long hz = std::lround(point.delta_min / kTwoPi);
  const long us = std::lround(point.tau * 1e6);
  return "pulse_N" + std::to_string(point.n) + "_dmin" + std::to_string(hz) + "_tau" +
         std::to_string(us) + ".csv";
}

void write_pulse_csv(const std::string& path, const Pulse& pulse, double min_omega) {
  csv::Table t;
  t.header = {"tau_s", "mu_rad_s", "n_segments"};
  t.rows.push_back({csv::format_double(pulse.duration()),
                    csv::format_double(min_omega - pulse.delta_min()),
                    std::to_string(pulse.segment_count())});
  for (int m = 0; m < pulse.segment_count(); ++m) {
    t.rows.push_back({csv::format_double(pulse.amplitude(m))});
  }
  t.write(path);
}

Pulse read_pulse_csv(const std::string& path, double min_omega) {
  const csv::Table t = csv::read(path);
  if (t.header.size() != 3 || t.rows.empty()) {
    throw ConfigError("malformed pulse file: " + path);
  }
  const double tau = std::stod(t.rows[0][0]);
  const double mu = std::stod(t.rows[0][1]);
  const int m = std::stoi(t.rows[0][2]);
  if (static_cast<int>(t.rows.size()) != m + 1) {
    throw ConfigError("pulse file row count does not match n_segments: " + path);
  }
  std::vector<double> amps(m);
  for (int i = 0; i < m; ++i) amps[i] = std::stod(t.rows[i + 1][0]);
  return Pulse::from_segments(std::move(amps), tau, min_omega - mu);
}

namespace {

int resolve_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs <= 0) return omp_get_max_threads();
  return jobs;
#else
  (void)jobs;
  return 1;
#endif
}

int run_command(const char* what, const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << what << ": config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << what << ": config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << what << ": " << e.what() << "\n";
    return 2;
  }
}

// Uses the [trap] section as a single configuration (first sweep entries for
// the pulse when none is supplied).
struct SinglePointSetup {
  TrapConfig trap;
  IonChain chain;
  Pulse pulse;
  int ja, jb;
};

SinglePointSetup single_point(const RunConfig& cfg,
                              const std::optional<std::string>& pulse_file) {
  const TrapConfig trap = cfg.trap_for(cfg.ion_count);
  trap.validate_gate_ions();
  IonChain chain = make_chain(trap);
  const auto [ja, jb] = trap.gate_ions;
  Pulse pulse = pulse_file.has_value()
                    ? read_pulse_csv(*pulse_file, chain.min_freq())
                    : optimize_amplitudes(chain, ja, jb, cfg.sweep_tau_us[0] * 1e-6,
                                          kTwoPi * cfg.sweep_delta_min_hz[0],
                                          cfg.segments_for(cfg.ion_count));
  return {trap, std::move(chain), std::move(pulse), ja, jb};
}

}  // namespace

int cmd_modes(const RunConfig& cfg) {
  return run_command("modes", [&] {
    const TrapConfig trap = cfg.trap_for(cfg.ion_count);
    const IonChain chain = make_chain(trap);
    csv::Table t;
    t.header = {"k", "omega_k_rad_s", "eta_k"};
    for (int j = 0; j < chain.size(); ++j) t.header.push_back("b_" + std::to_string(j));
    for (int k = 0; k < chain.size(); ++k) {
      std::vector<std::string> row = {std::to_string(k),
                                      csv::format_double(chain.mode_freqs[k]),
                                      csv::format_double(chain.lamb_dicke[k])};
      for (int j = 0; j < chain.size(); ++j) {
        row.push_back(csv::format_double(chain.b(j, k)));
      }
      t.rows.push_back(row);
    }
    const std::string path = out_path(cfg, "modes.csv");
    t.write(path);
    std::cout << "wrote " << path << " (" << chain.size() << " modes)\n";
  });
}

int cmd_optimize(const RunConfig& cfg, int jobs) {
  return run_command("optimize", [&] {
    fs::create_directories(cfg.output_dir);  // before the worker pool starts
    const std::vector<GridPoint> grid = expand_grid(cfg);
    struct Entry {
      GridPoint p;
      bool ok = false;
      std::string error;
      double omega_max = 0.0;
    };
    std::vector<Entry> entries(grid.size());
    const int nj = resolve_jobs(jobs);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nj)
    for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
      Entry& e = entries[i];
      e.p = grid[i];
      try {
        const TrapConfig trap = cfg.trap_for(e.p.n);
        trap.validate_gate_ions();
        const IonChain chain = make_chain(trap);
        const auto [ja, jb] = trap.gate_ions;
        const Pulse pulse = optimize_amplitudes(chain, ja, jb, e.p.tau, e.p.delta_min,
                                                cfg.segments_for(e.p.n));
        write_pulse_csv(out_path(cfg, pulse_filename(e.p)), pulse, chain.min_freq());
        e.omega_max = pulse.max_amplitude();
        e.ok = true;
      } catch (const std::exception& ex) {
        e.error = ex.what();
      }
    }
    csv::Table summary;
    summary.header = {"N", "delta_min_hz", "tau_s", "omega_max_rad_s", "status"};
    int failures = 0;
    for (const Entry& e : entries) {
      summary.rows.push_back({std::to_string(e.p.n),
                              csv::format_double(e.p.delta_min / kTwoPi),
                              csv::format_double(e.p.tau),
                              e.ok ? csv::format_double(e.omega_max) : "",
                              e.ok ? "ok" : "failed: " + e.error});
      failures += e.ok ? 0 : 1;
    }
    summary.write(out_path(cfg, "optimize_summary.csv"));
    std::cout << "optimized " << (entries.size() - failures) << "/" << entries.size()
              << " pulses\n";
    if (failures == static_cast<int>(entries.size())) {
      throw NumericalError("all grid points infeasible");
    }
  });
}

int cmd_simulate(const RunConfig& cfg, const std::optional<std::string>& pulse_file) {
  return run_command("simulate", [&] {
    const SinglePointSetup s = single_point(cfg, pulse_file);
    const NoiseModel noise = cfg.noise_for(cfg.ion_count);
    const SpinState rho0 = SpinState::ket00();
    const SpinState noisy =
        sequential_simulate(rho0, s.chain, s.pulse, noise, s.ja, s.jb, cfg.sim);
    const SpinState ideal =
        analytic_final_state(rho0, s.chain, s.pulse, s.ja, s.jb, cfg.sim.initial_nbar);
    const double infid = 1.0 - fidelity(noisy, ideal);

    csv::Table t;
    t.header = {"row", "col", "re", "im"};
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        t.rows.push_back({std::to_string(r), std::to_string(c),
                          csv::format_double(noisy.rho()(r, c).real()),
                          csv::format_double(noisy.rho()(r, c).imag())});
      }
    }
    t.write(out_path(cfg, "final_state.csv"));
    std::cout << "infidelity_vs_heating_free = " << csv::format_double(infid) << "\n";
  });
}

int cmd_bounds(const RunConfig& cfg, const std::optional<std::string>& pulse_file) {
  return run_command("bounds", [&] {
    const SinglePointSetup s = single_point(cfg, pulse_file);
    const NoiseModel noise = cfg.noise_for(cfg.ion_count);
    const ErrorReport report = make_report(s.pulse, s.chain, noise, s.ja, s.jb);
    csv::Table t;
    t.header = {"bound_simple", "bound_improved", "bound_loose", "estimator", "diag_A",
                "warnings"};
    std::string warn;
    for (const auto& w : report.warnings) warn += (warn.empty() ? "" : "; ") + w;
    t.rows.push_back({csv::format_double(report.simple_bound),
                      csv::format_double(report.improved_bound),
                      csv::format_double(report.loose_bound),
                      csv::format_double(report.heating_estimator),
                      csv::format_double(report.trajectory_diag_a), warn});
    t.write(out_path(cfg, "bounds.csv"));
    std::cout << "simple=" << csv::format_double(report.simple_bound)
              << " improved=" << csv::format_double(report.improved_bound)
              << " loose=" << csv::format_double(report.loose_bound)
              << " estimator=" << csv::format_double(report.heating_estimator) << "\n";
  });
}

int cmd_drift(const RunConfig& cfg, const std::optional<std::string>& pulse_file) {
  return run_command("drift", [&] {
    const SinglePointSetup s = single_point(cfg, pulse_file);
    const double xi = cfg.drift.xi_omega;
    const double pert = freq_drift_delta(s.pulse, s.chain, s.ja, s.jb, xi);
    const double exact = freq_drift_exact(s.pulse, s.chain, s.ja, s.jb, xi);
    const double state_infid =
        freq_drift_state_infidelity(s.pulse, s.chain, s.ja, s.jb, xi);
    const double rabi_pert = rabi_drift_infidelity(cfg.drift.xi_rabi);
    const double rabi_exact = rabi_drift_exact(cfg.drift.xi_rabi);
    csv::Table t;
    t.header = {"xi_omega_rad_s", "drift_pert", "drift_exact", "drift_state_infid",
                "xi_rabi", "rabi_pert", "rabi_exact"};
    t.rows.push_back({csv::format_double(xi), csv::format_double(pert),
                      csv::format_double(exact), csv::format_double(state_infid),
                      csv::format_double(cfg.drift.xi_rabi),
                      csv::format_double(rabi_pert), csv::format_double(rabi_exact)});
    t.write(out_path(cfg, "drift.csv"));
    std::cout << "drift_pert=" << csv::format_double(pert)
              << " drift_exact=" << csv::format_double(exact)
              << " drift_state_infid=" << csv::format_double(state_infid) << "\n";
  });
}

int cmd_sweep(const RunConfig& cfg, int jobs) {
  return run_command("sweep", [&] {
    const std::vector<GridPoint> grid = expand_grid(cfg);
    const int nj = resolve_jobs(jobs);

    // One step-halving certification on the first grid point.
    {
      const GridPoint& p = grid.front();
      const TrapConfig trap = cfg.trap_for(p.n);
      trap.validate_gate_ions();
      const IonChain chain = make_chain(trap);
      const auto [ja, jb] = trap.gate_ions;
      const Pulse pulse =
          optimize_amplitudes(chain, ja, jb, p.tau, p.delta_min, cfg.segments_for(p.n));
      const double dist = step_halving_distance(SpinState::ket00(), chain, pulse,
                                                cfg.noise_for(p.n), ja, jb, cfg.sim);
      if (!(dist < 1e-8)) {
        throw AccuracyError("step-halving certification failed: trace distance " +
                            csv::format_double(dist) +
                            "; raise rk_steps_per_cycle");
      }
    }

    std::vector<PointResult> results(grid.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(nj)
    for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
      results[i] = run_point(cfg, grid[i], /*parallel_kernel=*/nj == 1);
    }

    csv::Table t;
    t.header = {"N", "delta_min_hz", "tau_s", "omega_max_rad_s", "infid_sim",
                "bound_simple", "bound_improved", "bound_loose", "estimator", "diag_A",
                "infid_drift_pert", "infid_drift_exact"};
    csv::Table timing;
    timing.header = {"N", "delta_min_hz", "tau_s", "runtime_s"};
    csv::Table errors;
    errors.header = {"N", "delta_min_hz", "tau_s", "error"};
    int failures = 0;
    for (const PointResult& r : results) {
      const std::string n = std::to_string(r.point.n);
      const std::string d = csv::format_double(r.point.delta_min / kTwoPi);
      const std::string tau = csv::format_double(r.point.tau);
      if (!r.ok) {
        ++failures;
        errors.rows.push_back({n, d, tau, r.error});
        continue;
      }
      t.rows.push_back({n, d, tau, csv::format_double(r.omega_max),
                        csv::format_double(r.infid_sim),
                        csv::format_double(r.bound_simple),
                        csv::format_double(r.bound_improved),
                        csv::format_double(r.bound_loose),
                        csv::format_double(r.estimator),
                        csv::format_double(r.diag_a),
                        csv::format_double(r.infid_drift_pert),
                        csv::format_double(r.infid_drift_exact)});
      timing.rows.push_back({n, d, tau, csv::format_double(r.runtime_s)});
    }
    t.write(out_path(cfg, "results.csv"));
    timing.write(out_path(cfg, "timing.csv"));
    if (!errors.rows.empty()) errors.write(out_path(cfg, "errors.csv"));
    std::cout << "sweep finished: " << (results.size() - failures) << "/"
              << results.size() << " points ok\n";
    if (failures == static_cast<int>(results.size())) {
      throw NumericalError("all sweep points failed");
    }

    if (cfg.plots) {
      // infidelity and bounds versus N (first delta_min, first tau)
      std::vector<svg::Series> series(4);
      series[0] = {"simulated", {}, {}, "#d62728", true, true, false};
      series[1] = {"simple bound", {}, {}, "#1f77b4", true, true, true};
      series[2] = {"improved bound", {}, {}, "#ff7f0e", true, true, true};
      series[3] = {"estimator", {}, {}, "#2ca02c", true, true, true};
      const GridPoint& first = grid.front();
      for (const PointResult& r : results) {
        if (!r.ok || r.point.delta_min != first.delta_min || r.point.tau != first.tau) {
          continue;
        }
        const double n = r.point.n;
        series[0].x.push_back(n);
        series[0].y.push_back(r.infid_sim);
        series[1].x.push_back(n);
        series[1].y.push_back(r.bound_simple);
        series[2].x.push_back(n);
        series[2].y.push_back(r.bound_improved);
        series[3].x.push_back(n);
        series[3].y.push_back(r.estimator);
      }
      if (series[0].x.size() >= 2) {
        svg::write_chart(out_path(cfg, "infidelity_vs_n.svg"), series,
                         {"infidelity and bounds vs ion number", "N", "1 - F", false,
                          true});
      }

      // rescaled infidelity versus tau with power-law fit (mean over delta grid)
      std::vector<double> taus, means;
      for (double tau_us : cfg.sweep_tau_us) {
        const double tau = tau_us * 1e-6;
        double acc = 0.0;
        int count = 0;
        for (const PointResult& r : results) {
          if (!r.ok || r.point.tau != tau) continue;
          if (r.omega_max <= 0) continue;
          acc += r.infid_sim / (r.omega_max * r.omega_max);
          ++count;
        }
        if (count > 0) {
          taus.push_back(tau);
          means.push_back(acc / count);
        }
      }
      if (taus.size() >= 2) {
        bool positive = true;
        for (double m : means) positive &= m > 0;
        std::vector<svg::Series> s2;
        svg::Series pts{"mean rescaled infidelity", taus, means, "#d62728", false, true,
                        false};
        s2.push_back(pts);
        if (positive) {
          const PowerLawFit f = fit_power_law(taus, means);
          svg::Series fitline{"fit p = " + csv::format_double(f.exponent), {}, {},
                              "#1f77b4", true, false, true};
          for (double tau : taus) {
            fitline.x.push_back(tau);
            fitline.y.push_back(f.prefactor * std::pow(tau, f.exponent));
          }
          s2.push_back(fitline);
          std::cout << "rescaled infidelity power-law exponent p = "
                    << csv::format_double(f.exponent) << "\n";
        }
        svg::write_chart(out_path(cfg, "rescaled_infidelity_vs_tau.svg"), s2,
                         {"rescaled infidelity vs gate time", "tau [s]",
                          "(1-F)/Omega_max^2", true, true});
      }

      // runtime versus N
      std::vector<double> ns, times;
      for (const PointResult& r : results) {
        if (!r.ok) continue;
        ns.push_back(r.point.n);
        times.push_back(r.runtime_s);
      }
      if (ns.size() >= 2) {
        svg::write_chart(out_path(cfg, "runtime_vs_n.svg"),
                         {{"sequential runtime", ns, times, "#333333", false, true,
                           false}},
                         {"simulation time vs ion number", "N", "seconds", false,
                          false});
      }
    }
  });
}

int cmd_trajectory(const RunConfig& cfg, const std::string& pulse_file) {
  return run_command("trajectory", [&] {
    if (!fs::exists(pulse_file)) {
      throw ConfigError("pulse file not found: " + pulse_file);
    }
    const SinglePointSetup s = single_point(cfg, pulse_file);
    constexpr int kSamples = 600;
    csv::Table t;
    t.header = {"k", "j", "t_s", "re_alpha", "im_alpha"};
    std::vector<svg::Series> series;
    const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                             "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    for (int k = 0; k < s.chain.size(); ++k) {
      for (int j : {s.ja, s.jb}) {
        const ModeTrajectory traj = sample_trajectory(s.pulse, s.chain, j, k, kSamples);
        for (const auto& [time, alpha] : traj.samples) {
          t.rows.push_back({std::to_string(k), std::to_string(j),
                            csv::format_double(time),
                            csv::format_double(alpha.real()),
                            csv::format_double(alpha.imag())});
        }
        if (j == s.ja) {
          svg::Series ser;
          ser.label = "mode " + std::to_string(k);
          ser.color = palette[k % 8];
          ser.markers = false;
          for (const auto& [time, alpha] : traj.samples) {
            ser.x.push_back(alpha.real());
            ser.y.push_back(alpha.imag());
          }
          series.push_back(std::move(ser));
        }
      }
    }
    t.write(out_path(cfg, "trajectory.csv"));
    svg::write_chart(out_path(cfg, "trajectory.svg"), series,
                     {"phase-space trajectories (ion j_a)", "Re alpha", "Im alpha",
                      false, false});

    svg::Series amp{"|Omega(t)|", {}, {}, "#333333", true, false, false};
    for (int m = 0; m < s.pulse.segment_count(); ++m) {
      amp.x.push_back(s.pulse.segment_start(m));
      amp.y.push_back(std::abs(s.pulse.amplitude(m)));
      amp.x.push_back(s.pulse.segment_start(m + 1));
      amp.y.push_back(std::abs(s.pulse.amplitude(m)));
    }
    svg::write_chart(out_path(cfg, "pulse_shape.svg"), {amp},
                     {"pulse amplitude", "t [s]", "|Omega| [rad/s]", false, false});
    std::cout << "wrote trajectory.csv, trajectory.svg, pulse_shape.svg\n";
  });
}

int cmd_bench(const RunConfig& cfg) {
  return run_command("bench", [&] {
    csv::Table t;
    t.header = {"N", "method", "runtime_s"};
    std::vector<double> ns, times;
    const double tau = cfg.sweep_tau_us[0] * 1e-6;
    const double delta_min = kTwoPi * cfg.sweep_delta_min_hz[0];
    for (int n : cfg.sweep_n) {
      const GridPoint p{n, delta_min, tau};
      const TrapConfig trap = cfg.trap_for(n);
      trap.validate_gate_ions();
      const IonChain chain = make_chain(trap);
      const auto [ja, jb] = trap.gate_ions;
      const Pulse pulse =
          optimize_amplitudes(chain, ja, jb, p.tau, p.delta_min, cfg.segments_for(n));
      const NoiseModel noise = cfg.noise_for(n);
      SimConfig sim = cfg.sim;
      sim.parallel_kernel = false;  // timings reflect a single core
      const double t0 = wall_seconds();
      (void)sequential_simulate(SpinState::ket00(), chain, pulse, noise, ja, jb, sim);
      const double dt = wall_seconds() - t0;
      t.rows.push_back({std::to_string(n), "sequential", csv::format_double(dt)});
      ns.push_back(n);
      times.push_back(dt);
      std::cout << "N=" << n << " sequential " << csv::format_double(dt) << " s\n";

      if (n <= 2) {
        const double t1 = wall_seconds();
        (void)brute_force_simulate(SpinState::ket00(), chain, pulse, noise, ja, jb, sim);
        const double dt2 = wall_seconds() - t1;
        t.rows.push_back({std::to_string(n), "brute_force", csv::format_double(dt2)});
        std::cout << "N=" << n << " brute_force " << csv::format_double(dt2) << " s\n";
      }
    }
    t.write(out_path(cfg, "bench.csv"));
    if (ns.size() >= 2) {
      const LinearFit fit = fit_line(ns, times);
      std::cout << "linear fit: t = " << csv::format_double(fit.intercept) << " + "
                << csv::format_double(fit.slope)
                << " * N, max relative residual = "
                << csv::format_double(fit.max_relative_residual) << "\n";
      if (cfg.plots) {
        svg::Series pts{"sequential", ns, times, "#333333", false, true, false};
        svg::Series line{"linear fit", {}, {}, "#d62728", true, false, true};
        for (double n : ns) {
          line.x.push_back(n);
          line.y.push_back(fit.intercept + fit.slope * n);
        }
        svg::write_chart(out_path(cfg, "bench.svg"), {pts, line},
                         {"runtime vs ion number", "N", "seconds", false, false});
      }
    }
  });
}

}  // namespace ionsim

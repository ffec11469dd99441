#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ionsim/chain.hpp"
#include "ionsim/config.hpp"
#include "ionsim/csv.hpp"
#include "ionsim/errors.hpp"
#include "ionsim/pulse.hpp"
#include "ionsim/sweep.hpp"

using namespace ionsim;
namespace fs = std::filesystem;

namespace {

std::string sample_config_text() {
  return R"(# sample run
seed = 7

[trap]
ion_count = 3
freq_x_hz = 3.1e6
freq_z_hz = 0.35e6
gate_ions = 0, 2

[sweep]
n = 2, 3
delta_min_hz = 30000, 60000
tau_us = 300
segments = 16

[noise]
model = com_linear
gamma_per_s = 50
channel = heating

[sim]
fock_cutoff = 10
rk_steps_per_cycle = 300

[drift]
xi_omega_hz = -200
xi_rabi = 0.01

[output]
dir = out_test
plots = false
)";
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "ionsim_io_test";
  fs::create_directories(dir);
  return dir;
}

std::string file_contents(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

#ifdef IONSIM_CLI_PATH
int run_cli(const std::string& args, const fs::path& dir, std::string* err_out = nullptr) {
  const fs::path errfile = dir / "stderr.txt";
  const std::string cmd =
      std::string(IONSIM_CLI_PATH) + " " + args + " 2> " + errfile.string();
  const int status = std::system(cmd.c_str());
  if (err_out) *err_out = file_contents(errfile);
  return WEXITSTATUS(status);
}
#endif

}  // namespace

TEST_CASE("config parse / serialize round trip") {
  const RunConfig a = parse_config(sample_config_text());
  CHECK(a.ion_count == 3);
  CHECK(a.gate_ions_auto == false);
  CHECK(a.gate_ion_b == 2);
  CHECK(a.sweep_n.size() == 2);
  CHECK(a.sweep_delta_min_hz[1] == 60000.0);
  CHECK(a.n_segments == 16);
  CHECK(a.noise_channel == "heating");
  CHECK(a.drift.xi_omega == doctest::Approx(-kTwoPi * 200.0));
  CHECK(a.seed == 7);

  const RunConfig b = parse_config(serialize_config(a));
  CHECK(serialize_config(a) == serialize_config(b));
  CHECK(b.freq_x_hz == a.freq_x_hz);
  CHECK(b.sweep_delta_min_hz == a.sweep_delta_min_hz);
  CHECK(b.sim.rk_steps_per_cycle == 300);
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_AS((void)parse_config("nonsense_key = 3\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[sweep]\ntau_us =\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[noise]\nmodel = fancy\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config("[sweep]\ndelta_min_hz = -3\n"), ConfigError);
}

TEST_CASE("shortest round-trip float formatting") {
  for (double v : {0.1, 1.0 / 3.0, 300e-6, 2.4674011002723395e-4, 1.8849555921538759e7,
                   -0.0, 42.0}) {
    const std::string s = csv::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(csv::format_double(0.1) == "0.1");
}

TEST_CASE("pulse CSV round trip is exact") {
  const fs::path dir = temp_dir();
  TrapConfig trap;
  trap.ion_count = 2;
  const IonChain chain = make_chain(trap);
  const Pulse pulse =
      optimize_amplitudes(chain, 0, 1, 300e-6, kTwoPi * 0.03e6, 16);
  const fs::path path = dir / "pulse.csv";
  write_pulse_csv(path.string(), pulse, chain.min_freq());
  const Pulse loaded = read_pulse_csv(path.string(), chain.min_freq());
  CHECK(loaded.segment_count() == pulse.segment_count());
  CHECK(loaded.duration() == pulse.duration());
  // the file stores mu; recovering delta_min = min_omega - mu is exact only to
  // an ulp of the much larger mu
  CHECK(loaded.delta_min() ==
        doctest::Approx(pulse.delta_min()).epsilon(1e-12));
  CHECK(loaded.is_symmetric());
  for (int m = 0; m < pulse.segment_count(); ++m) {
    CHECK(loaded.amplitude(m) == pulse.amplitude(m));
  }
  // writing the loaded pulse again reproduces the same bytes
  const fs::path path2 = dir / "pulse2.csv";
  write_pulse_csv(path2.string(), loaded, chain.min_freq());
  CHECK(file_contents(path) == file_contents(path2));
}

#ifdef IONSIM_CLI_PATH

TEST_CASE("cli: modes writes the analytic two-ion modes") {
  const fs::path dir = temp_dir() / "modes2";
  fs::create_directories(dir);
  RunConfig cfg;
  cfg.ion_count = 2;
  const fs::path cfg_path = dir / "run.cfg";
  std::ofstream(cfg_path) << serialize_config(cfg);
  const int code = run_cli("--config " + cfg_path.string() + " --out " + dir.string() +
                               " modes",
                           dir);
  CHECK(code == 0);
  const csv::Table t = csv::read((dir / "modes.csv").string());
  REQUIRE(t.rows.size() == 2);
  const double wx = kTwoPi * cfg.freq_x_hz;
  const double wz = kTwoPi * cfg.freq_z_hz;
  CHECK(std::stod(t.rows[0][1]) == doctest::Approx(wx).epsilon(1e-12));
  CHECK(std::stod(t.rows[1][1]) ==
        doctest::Approx(std::sqrt(wx * wx - wz * wz)).epsilon(1e-12));
}

TEST_CASE("cli: single-ion chain gives one row at omega_x") {
  const fs::path dir = temp_dir() / "modes1";
  fs::create_directories(dir);
  RunConfig cfg;
  cfg.ion_count = 1;
  std::ofstream(dir / "run.cfg") << serialize_config(cfg);
  const int code =
      run_cli("--config " + (dir / "run.cfg").string() + " --out " + dir.string() +
                  " modes",
              dir);
  CHECK(code == 0);
  const csv::Table t = csv::read((dir / "modes.csv").string());
  REQUIRE(t.rows.size() == 1);
  CHECK(std::stod(t.rows[0][1]) == doctest::Approx(kTwoPi * 3e6).epsilon(1e-12));
}

TEST_CASE("cli: unstable trap exits with code 2 and a stderr message") {
  const fs::path dir = temp_dir() / "unstable";
  fs::create_directories(dir);
  RunConfig cfg;
  cfg.ion_count = 5;
  cfg.freq_z_hz = 2.9e6;  // zigzag
  std::ofstream(dir / "run.cfg") << serialize_config(cfg);
  std::string err;
  const int code = run_cli("--config " + (dir / "run.cfg").string() + " --out " +
                               dir.string() + " modes",
                           dir, &err);
  CHECK(code == 2);
  CHECK(err.find("zigzag") != std::string::npos);
}

TEST_CASE("cli: malformed config exits with code 1") {
  const fs::path dir = temp_dir() / "badcfg";
  fs::create_directories(dir);
  std::ofstream(dir / "run.cfg") << "[trap]\nion_count = maybe\n";
  std::string err;
  const int code = run_cli("--config " + (dir / "run.cfg").string() + " modes", dir,
                           &err);
  CHECK(code == 1);
  CHECK(!err.empty());
}

TEST_CASE("cli: optimize is deterministic and infeasible points are recorded") {
  const fs::path dir = temp_dir() / "opt";
  fs::remove_all(dir);
  fs::create_directories(dir);
  RunConfig cfg;
  cfg.ion_count = 2;
  cfg.sweep_n = {2};
  cfg.sweep_delta_min_hz = {30000.0};
  cfg.sweep_tau_us = {300.0};
  cfg.n_segments = 16;
  std::ofstream(dir / "run.cfg") << serialize_config(cfg);
  const std::string base =
      "--config " + (dir / "run.cfg").string() + " --jobs 1 optimize";
  CHECK(run_cli("--out " + (dir / "a").string() + " " + base, dir) == 0);
  CHECK(run_cli("--out " + (dir / "b").string() + " " + base, dir) == 0);
  const std::string name = "pulse_N2_dmin30000_tau300.csv";
  CHECK(file_contents(dir / "a" / name) == file_contents(dir / "b" / name));
  CHECK(file_contents(dir / "a" / "optimize_summary.csv") ==
        file_contents(dir / "b" / "optimize_summary.csv"));

  // M = 2 on the same grid: infeasible, recorded, nonzero exit (all failed)
  cfg.n_segments = 2;
  std::ofstream(dir / "bad.cfg") << serialize_config(cfg);
  std::string err;
  const int code = run_cli("--config " + (dir / "bad.cfg").string() + " --out " +
                               (dir / "c").string() + " --jobs 1 optimize",
                           dir, &err);
  CHECK(code == 2);
  const csv::Table summary = csv::read((dir / "c" / "optimize_summary.csv").string());
  REQUIRE(summary.rows.size() == 1);
  CHECK(summary.rows[0][4].find("failed") != std::string::npos);
}

TEST_CASE("cli: simulate, bounds, drift, trajectory pipeline") {
  const fs::path dir = temp_dir() / "pipeline";
  fs::remove_all(dir);
  fs::create_directories(dir);
  RunConfig cfg;
  cfg.ion_count = 2;
  cfg.sweep_n = {2};
  cfg.sweep_delta_min_hz = {30000.0};
  cfg.sweep_tau_us = {120.0};  // short gate keeps the simulate call quick
  cfg.n_segments = 16;
  std::ofstream(dir / "run.cfg") << serialize_config(cfg);
  const std::string base = "--config " + (dir / "run.cfg").string();

  CHECK(run_cli(base + " --out " + dir.string() + " --jobs 1 optimize", dir) == 0);
  const fs::path pulse = dir / "pulse_N2_dmin30000_tau120.csv";
  REQUIRE(fs::exists(pulse));

  CHECK(run_cli(base + " --out " + dir.string() + " simulate --pulse " +
                    pulse.string(),
                dir) == 0);
  const csv::Table state = csv::read((dir / "final_state.csv").string());
  CHECK(state.rows.size() == 16);
  double trace = 0.0;
  for (const auto& row : state.rows) {
    if (row[0] == row[1]) trace += std::stod(row[2]);
  }
  CHECK(trace == doctest::Approx(1.0).epsilon(1e-9));

  CHECK(run_cli(base + " --out " + dir.string() + " bounds --pulse " + pulse.string(),
                dir) == 0);
  const csv::Table bounds = csv::read((dir / "bounds.csv").string());
  REQUIRE(bounds.rows.size() == 1);
  CHECK(std::stod(bounds.rows[0][0]) > 0.0);   // simple bound
  CHECK(bounds.rows[0][5].empty());            // no warnings for a closed pulse

  CHECK(run_cli(base + " --out " + dir.string() + " drift --pulse " + pulse.string(),
                dir) == 0);
  const csv::Table drift = csv::read((dir / "drift.csv").string());
  REQUIRE(drift.rows.size() == 1);
  CHECK(std::stod(drift.rows[0][1]) > 0.0);

  CHECK(run_cli(base + " --out " + dir.string() + " trajectory --pulse " +
                    pulse.string(),
                dir) == 0);
  const csv::Table traj = csv::read((dir / "trajectory.csv").string());
  // >= 500 samples per (mode, ion) pair, 2 modes x 2 ions
  CHECK(traj.rows.size() >= 4 * 500);
  // closed trajectories: final |alpha| within 1e-6 of the maximum radius
  double max_r = 0.0, final_r = 0.0;
  for (const auto& row : traj.rows) {
    if (row[0] != "0" || row[1] != "0") continue;
    const double re = std::stod(row[3]);
    const double im = std::stod(row[4]);
    const double r = std::hypot(re, im);
    max_r = std::max(max_r, r);
    final_r = r;
  }
  CHECK(final_r < 1e-6 * max_r);
  CHECK(fs::exists(dir / "trajectory.svg"));
  CHECK(fs::exists(dir / "pulse_shape.svg"));
}

TEST_CASE("cli: trajectory requires the pulse file") {
  const fs::path dir = temp_dir() / "traj";
  fs::create_directories(dir);
  RunConfig cfg;
  cfg.ion_count = 2;
  std::ofstream(dir / "run.cfg") << serialize_config(cfg);
  std::string err;
  const int code = run_cli("--config " + (dir / "run.cfg").string() + " --out " +
                               dir.string() + " trajectory --pulse " +
                               (dir / "missing.csv").string(),
                           dir, &err);
  CHECK(code == 1);
}

#endif  // IONSIM_CLI_PATH

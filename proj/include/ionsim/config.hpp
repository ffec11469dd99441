#pragma once

#include <string>
#include <vector>

#include "ionsim/bounds.hpp"
#include "ionsim/chain.hpp"
#include "ionsim/master.hpp"
#include "ionsim/noise.hpp"

namespace ionsim {

// Config-file view of the run.  Frequencies are plain Hz in the file and
// converted to angular frequencies at the point of use; masses are in amu.
struct RunConfig {
  // [trap]
  int ion_count = 2;
  double ion_mass_amu = kYb171IonMassKg / kAtomicMassUnit;
  double freq_x_hz = 3.0e6;
  double freq_z_hz = 0.4e6;
  double k_vec_rad_per_m = kRaman355CounterPropKVec;
  bool gate_ions_auto = true;  // centre pair of the chain
  int gate_ion_a = 0;
  int gate_ion_b = 1;

  // [sweep]
  std::vector<int> sweep_n = {2};
  std::vector<double> sweep_delta_min_hz = {3.0e4};
  std::vector<double> sweep_tau_us = {300.0};
  int n_segments = 0;  // 0 = auto (4N + 4)

  // [noise]
  std::string noise_model = "com_linear";  // or "uniform"
  double noise_gamma = 50.0;               // 1/s
  std::string noise_channel = "heating";   // "heating" | "dephasing" | "both"

  // [sim]
  SimConfig sim;

  // [drift]
  DriftConfig drift{-kTwoPi * 200.0, 0.01};

  // [output]
  std::string output_dir = "out";
  bool plots = false;

  unsigned seed = 0;  // reserved; the pipeline is deterministic

  TrapConfig trap_for(int n) const;
  NoiseModel noise_for(int n) const;
  std::pair<int, int> gate_pair_for(int n) const;
  int segments_for(int n) const { return n_segments > 0 ? n_segments : 4 * n + 4; }

  // Throws ConfigError on empty sweep lists, non-positive detunings, negative
  // rates, or unknown model/channel names.
  void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

}  // namespace ionsim

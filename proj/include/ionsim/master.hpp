#pragma once

#include <cstddef>
#include <vector>

#include "ionsim/chain.hpp"
#include "ionsim/noise.hpp"
#include "ionsim/pulse.hpp"
#include "ionsim/spin_state.hpp"

namespace ionsim {

struct SimConfig {
  int fock_cutoff = 10;
  double initial_nbar = 0.0;  // mean thermal phonon number per mode
  // Substeps per pulse segment: at least rk_substeps_per_segment, raised so
  // the fastest detuning phase gets >= rk_steps_per_cycle points per cycle.
  int rk_substeps_per_segment = 64;
  int rk_steps_per_cycle = 280;
  double leakage_tol = 1e-6;  // cap on the top Fock level population
  std::size_t memory_budget_bytes = std::size_t{1} << 30;  // brute-force guard
  bool parallel_kernel = true;  // OpenMP row parallelism inside one simulation

  void validate() const;
};

// Evolves rho_spin x (thermal state of mode k) under the mode-k restriction of
// the master equation over [0, tau], then traces the mode out.
// Throws CutoffError when the top Fock level population exceeds leakage_tol at
// a segment boundary.
SpinState evolve_single_mode(const SpinState& rho_spin, const IonChain& chain,
                             const Pulse& pulse, const NoiseModel& noise, int j_a,
                             int j_b, int k, const SimConfig& sim);

// Sequential mode simulation: folds evolve_single_mode over all modes.
// `mode_order` (optional) permutes the fold; the result is order-independent
// up to integrator tolerance because the per-mode generators commute.
SpinState sequential_simulate(const SpinState& rho_spin0, const IonChain& chain,
                              const Pulse& pulse, const NoiseModel& noise, int j_a,
                              int j_b, const SimConfig& sim,
                              const std::vector<int>& mode_order = {});

// Full master equation on the joint space of all modes at once (N <= 3 and a
// memory budget; the oracle for the sequential algorithm).
SpinState brute_force_simulate(const SpinState& rho_spin0, const IonChain& chain,
                               const Pulse& pulse, const NoiseModel& noise, int j_a,
                               int j_b, const SimConfig& sim);

enum class HeatingFreeBackend { kSequential, kAnalytic };

// Final spin state without Lindblad terms.  kSequential integrates with all
// rates zero; kAnalytic evaluates the closed-form propagator (conditional
// displacements + XX rotation).  The two agree to integrator tolerance.
SpinState heating_free_simulate(const SpinState& rho_spin0, const IonChain& chain,
                                const Pulse& pulse, int j_a, int j_b,
                                const SimConfig& sim,
                                HeatingFreeBackend backend = HeatingFreeBackend::kAnalytic);

// Closed-form noise-free final spin state (modes start thermal with mean nbar
// and are traced out).  delta_shift applies a common quasi-static detuning
// drift; rabi_scale multiplies the pulse amplitude.
SpinState analytic_final_state(const SpinState& rho_spin0, const IonChain& chain,
                               const Pulse& pulse, int j_a, int j_b, double nbar = 0.0,
                               double delta_shift = 0.0, double rabi_scale = 1.0);

// Trace distance between a run at the configured substep count and one at
// double the count; certifies the integrator accuracy of a sweep.
double step_halving_distance(const SpinState& rho_spin0, const IonChain& chain,
                             const Pulse& pulse, const NoiseModel& noise, int j_a,
                             int j_b, const SimConfig& sim);

}  // namespace ionsim

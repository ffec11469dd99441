#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ionsim/chain.hpp"
#include "ionsim/noise.hpp"
#include "ionsim/pulse.hpp"
#include "ionsim/spin_state.hpp"

namespace ionsim {

// Analytic error bounds and estimators next to the simulated infidelity.
struct ErrorReport {
  double simple_bound = 0.0;
  double improved_bound = 0.0;
  double loose_bound = 0.0;
  double heating_estimator = 0.0;
  double trajectory_diag_a = 0.0;  // the quantity A of the improved bound
  std::optional<double> simulated_infidelity;
  std::vector<std::string> warnings;
};

struct DriftConfig {
  double xi_omega = 0.0;  // rad/s, common shift of all detunings
  double xi_rabi = 0.0;   // fractional Rabi amplitude shift
};

// Failure-rate bound: sum_k (G_up + G_down + G_deph / 4) tau.
double simple_bound(const NoiseModel& noise, double tau);

// Trajectory bound: sum over ordered gate-ion pairs of
// | sum_k (G_up + G_down + G_deph) integral_0^tau conj(alpha_j1) alpha_j2 dt |.
// Attaches a warning to reports when the pulse does not close (alpha(tau) != 0)
// since the derivation assumes a well-optimized pulse.
double improved_bound(const Pulse& pulse, const IonChain& chain, const NoiseModel& noise,
                      int j_a, int j_b);

// max_k (G_up + G_down + G_deph) eta_k^2 integral_0^tau |integral_0^t Omega e^{-i d_k t1} dt1|^2 dt
double loose_bound(const Pulse& pulse, const IonChain& chain, const NoiseModel& noise,
                   int j_a, int j_b);

// Order-of-magnitude scaling Omega_max^2 eta_max Gamma_max tau^3 (no hidden constant).
double scaling_estimate(double omega_max, double eta_max, double gamma_max, double tau);

// improved_bound with only the excitation rates: closer to simulation when the
// modes stay near the ground state.
double heating_estimator(const Pulse& pulse, const IonChain& chain,
                         const NoiseModel& noise, int j_a, int j_b);

// The diagnostic A = sum_pairs sum_k integral |conj(alpha_j1) alpha_j2| dt.
double trajectory_diag_a(const Pulse& pulse, const IonChain& chain, int j_a, int j_b);

// Perturbative drift infidelity: xi^2 (sum_k dTheta/d delta_k)^2.
double freq_drift_delta(const Pulse& pulse, const IonChain& chain, int j_a, int j_b,
                        double xi_omega);

// Theta with every detuning shifted by xi (exact recomputation).
double theta_drifted(const Pulse& pulse, const IonChain& chain, int j_a, int j_b,
                     double xi_omega);

// Exact drift infidelity proxy (Theta - Theta~)^2.
double freq_drift_exact(const Pulse& pulse, const IonChain& chain, int j_a, int j_b,
                        double xi_omega);

// Full-state drift infidelity 1 - F between the closed-form final states with
// and without the detuning shift; includes the residual displacement error a
// non-robust pulse picks up.
double freq_drift_state_infidelity(const Pulse& pulse, const IonChain& chain, int j_a,
                                   int j_b, double xi_omega,
                                   const SpinState& rho0 = SpinState::ket00(),
                                   double nbar = 0.0);

// (pi^2/4) xi^2 for a quasi-static fractional Rabi shift.
double rabi_drift_infidelity(double xi_rabi);

// Exact counterpart (Theta - (1 + xi)^2 Theta)^2 at Theta = pi/4.
double rabi_drift_exact(double xi_rabi);

// All bounds plus an optional simulated infidelity in one report.
ErrorReport make_report(const Pulse& pulse, const IonChain& chain, const NoiseModel& noise,
                        int j_a, int j_b,
                        std::optional<double> simulated_infidelity = std::nullopt);

}  // namespace ionsim

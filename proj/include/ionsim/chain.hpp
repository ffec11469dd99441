#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ionsim/constants.hpp"

namespace ionsim {

// Static trap/laser parameters of a linear ion crystal.
struct TrapConfig {
  int ion_count = 2;
  double ion_mass = kYb171IonMassKg;                 // kg
  double omega_x = kTwoPi * 3.0e6;                   // rad/s, transverse
  double omega_z = kTwoPi * 0.4e6;                   // rad/s, axial
  double k_vec = kRaman355CounterPropKVec;           // rad/m
  std::pair<int, int> gate_ions{0, 1};               // (j_a, j_b), j_a < j_b

  // Throws std::invalid_argument unless 0 <= j_a < j_b < ion_count.
  void validate_gate_ions() const;
};

// Equilibrium positions, transverse normal modes, and Lamb-Dicke parameters.
// Modes are sorted by decreasing frequency, so index 0 is always the
// center-of-mass mode with omega_0 = omega_x and a uniform mode vector.
struct IonChain {
  std::vector<double> positions;    // meters, strictly increasing
  std::vector<double> mode_freqs;   // rad/s, descending
  Eigen::MatrixXd mode_matrix;      // b(j, k): ion j participation in mode k
  std::vector<double> lamb_dicke;   // eta_k

  int size() const { return static_cast<int>(mode_freqs.size()); }
  double min_freq() const {
    return *std::min_element(mode_freqs.begin(), mode_freqs.end());
  }
  double b(int ion, int mode) const { return mode_matrix(ion, mode); }
};

// Characteristic length (e^2 / (4 pi eps0 m omega_z^2))^(1/3).
double length_scale(const TrapConfig& cfg);

// Coulomb-crystal equilibrium z-coordinates, sorted ascending and
// antisymmetric about the origin.  Damped Newton on the force equations in
// dimensionless units; throws ConvergenceError after the iteration cap.
std::vector<double> equilibrium_positions(const TrapConfig& cfg);

// Transverse normal modes from the positions returned by
// equilibrium_positions.  Throws StabilityError if any omega_k^2 <= 0.
std::pair<std::vector<double>, Eigen::MatrixXd> transverse_modes(
    const TrapConfig& cfg, const std::vector<double>& positions);

// eta_k = k_vec * sqrt(hbar / (2 m omega_k)).
std::vector<double> lamb_dicke(const TrapConfig& cfg, const std::vector<double>& mode_freqs);

// Convenience: the three steps above in one call.
IonChain make_chain(const TrapConfig& cfg);

// Residual of the axial force balance at `positions`, in units of the
// characteristic force m omega_z^2 ell.  Used by tests and the CLI to report
// solver quality.
double equilibrium_residual(const TrapConfig& cfg, const std::vector<double>& positions);

}  // namespace ionsim

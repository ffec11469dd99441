#pragma once

#include <vector>

namespace ionsim {

// Per-mode Lindblad rates.  gamma_up / gamma_down are phonon excitation /
// relaxation rates (phonons per second); gamma_deph is the mode dephasing rate.
struct NoiseModel {
  std::vector<double> gamma_up;
  std::vector<double> gamma_down;
  std::vector<double> gamma_deph;

  static NoiseModel zero(int n_modes);
  int modes() const { return static_cast<int>(gamma_up.size()); }
  // Throws std::invalid_argument on negative rates or mismatched lengths.
  void validate(int n_modes) const;
};

enum class NoiseChannel { kHeating, kDephasing, kBoth };

// COM-mode rate gamma * N (mode 0 in the descending-frequency convention),
// every other mode gamma.  Correlated electric-field noise plus an
// uncorrelated floor.
NoiseModel com_linear_noise(int n_modes, double gamma, NoiseChannel channel);

// Identical rate gamma on every mode (fully uncorrelated noise).
NoiseModel uniform_noise(int n_modes, double gamma, NoiseChannel channel);

}  // namespace ionsim

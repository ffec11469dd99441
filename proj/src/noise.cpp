#include "ionsim/noise.hpp"

#include <stdexcept>

namespace ionsim {

NoiseModel NoiseModel::zero(int n_modes) {
  NoiseModel m;
  m.gamma_up.assign(n_modes, 0.0);
  m.gamma_down.assign(n_modes, 0.0);
  m.gamma_deph.assign(n_modes, 0.0);
  return m;
}

void NoiseModel::validate(int n_modes) const {
  if (static_cast<int>(gamma_up.size()) != n_modes ||
      static_cast<int>(gamma_down.size()) != n_modes ||
      static_cast<int>(gamma_deph.size()) != n_modes) {
    throw std::invalid_argument("noise model length does not match mode count");
  }
  for (int k = 0; k < n_modes; ++k) {
    if (gamma_up[k] < 0 || gamma_down[k] < 0 || gamma_deph[k] < 0) {
      throw std::invalid_argument("noise rates must be non-negative");
    }
  }
}

namespace {

NoiseModel build(int n_modes, double gamma, NoiseChannel channel, bool com_scaled) {
  if (gamma < 0) throw std::invalid_argument("noise rate must be non-negative");
  NoiseModel m = NoiseModel::zero(n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double rate = (com_scaled && k == 0) ? gamma * n_modes : gamma;
    if (channel == NoiseChannel::kHeating || channel == NoiseChannel::kBoth) {
      m.gamma_up[k] = rate;
      m.gamma_down[k] = rate;
    }
    if (channel == NoiseChannel::kDephasing || channel == NoiseChannel::kBoth) {
      m.gamma_deph[k] = rate;
    }
  }
  return m;
}

}  // namespace

NoiseModel com_linear_noise(int n_modes, double gamma, NoiseChannel channel) {
  return build(n_modes, gamma, channel, true);
}

NoiseModel uniform_noise(int n_modes, double gamma, NoiseChannel channel) {
  return build(n_modes, gamma, channel, false);
}

}  // namespace ionsim

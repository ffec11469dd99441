#include <array>
#include <cmath>

#include "ionsim/master.hpp"

// Closed-form noise-free propagator.  In the sigma^x product eigenbasis the
// evolution is a conditional displacement per mode plus the XX rotation:
//   U = exp(-i theta sx_a sx_b) prod_k D_k(beta_s^k),
//   beta_s^k = s_a alpha_a^k(tau) + s_b alpha_b^k(tau).
// Tracing a thermal mode against a pair of displacements gives
//   tr[D(b) rho_th D(b')^dag] = exp(i Im(conj(b') b)) exp(-|b - b'|^2 (2 nbar + 1)/2).

namespace ionsim {

namespace {

// Hadamard on each qubit maps the computational basis to the sigma^x basis.
Eigen::Matrix4cd hadamard2() {
  Eigen::Matrix2cd h;
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = h(i, j) * h;
  return out;
}

}  // namespace

SpinState analytic_final_state(const SpinState& rho_spin0, const IonChain& chain,
                               const Pulse& pulse, int j_a, int j_b, double nbar,
                               double delta_shift, double rabi_scale) {
  rho_spin0.validate();
  const int n = chain.size();
  const double tau = pulse.duration();

  // Final displacements per mode and ion (pulse identical on both ions).
  std::vector<cplx> alpha_a(n), alpha_b(n);
  for (int k = 0; k < n; ++k) {
    const AlphaEvaluator eval(pulse, chain, k, delta_shift);
    const cplx g = rabi_scale * eval(tau);
    alpha_a[k] = chain.b(j_a, k) * g;
    alpha_b[k] = chain.b(j_b, k) * g;
  }
  const double theta_val =
      rabi_scale * rabi_scale * theta(pulse, chain, j_a, j_b, delta_shift);

  // sigma^x eigenvalues per x-basis index (bit 0 -> +1, bit 1 -> -1).
  const auto sign_of = [](int s, int qubit) {
    return ((s >> (1 - qubit)) & 1) ? -1.0 : 1.0;
  };

  const Eigen::Matrix4cd w = hadamard2();
  const Eigen::Matrix4cd rho_x = w * rho_spin0.rho() * w;

  Eigen::Matrix4cd out_x;
  const double width = 2.0 * nbar + 1.0;
  for (int s = 0; s < 4; ++s) {
    const double sa = sign_of(s, 0);
    const double sb = sign_of(s, 1);
    for (int sp = 0; sp < 4; ++sp) {
      const double spa = sign_of(sp, 0);
      const double spb = sign_of(sp, 1);
      cplx factor = std::exp(cplx(0.0, -theta_val * (sa * sb - spa * spb)));
      for (int k = 0; k < n; ++k) {
        const cplx beta = sa * alpha_a[k] + sb * alpha_b[k];
        const cplx beta_p = spa * alpha_a[k] + spb * alpha_b[k];
        const cplx diff = beta - beta_p;
        const double phase = std::imag(std::conj(beta_p) * beta);
        factor *= std::exp(cplx(-0.5 * width * std::norm(diff), phase));
      }
      out_x(s, sp) = factor * rho_x(s, sp);
    }
  }
  return SpinState(w * out_x * w);
}

}  // namespace ionsim

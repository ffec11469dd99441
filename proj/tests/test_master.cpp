#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ionsim/chain.hpp"
#include "ionsim/errors.hpp"
#include "ionsim/master.hpp"
#include "ionsim/noise.hpp"
#include "ionsim/pulse.hpp"

using namespace ionsim;

namespace {

IonChain two_ion_chain() {
  TrapConfig cfg;
  cfg.ion_count = 2;
  return make_chain(cfg);
}

// small, fast configurations for unit-level checks; the short strong test
// pulses need a little extra Fock headroom
SimConfig fast_sim(int nc = 12) {
  SimConfig sim;
  sim.fock_cutoff = nc;
  sim.rk_substeps_per_segment = 64;
  sim.rk_steps_per_cycle = 400;
  return sim;
}

Eigen::Matrix4cd ideal_xx_gate() {
  // exp(-i pi/4 XX)
  Eigen::Matrix4cd xx = Eigen::Matrix4cd::Zero();
  xx(0, 3) = xx(3, 0) = xx(1, 2) = xx(2, 1) = 1.0;
  const Eigen::Matrix4cd id = Eigen::Matrix4cd::Identity();
  return (id - cplx(0, 1) * xx) / std::sqrt(2.0);
}

}  // namespace

TEST_CASE("fidelity examples") {
  const SpinState s00 = SpinState::ket00();
  CHECK(fidelity(s00, s00) == doctest::Approx(1.0).epsilon(1e-14));

  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi[3] = 1.0;
  const SpinState s11 = SpinState::pure(psi);
  CHECK(fidelity(s00, s11) == doctest::Approx(0.0).epsilon(1e-14));

  const SpinState mixed{Eigen::Matrix4cd::Identity() * 0.25};
  CHECK(fidelity(s00, mixed) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(fidelity(s00, mixed) - fidelity(mixed, s00)) < 1e-12);
}

TEST_CASE("fidelity rejects non-states") {
  Eigen::Matrix4cd bad = Eigen::Matrix4cd::Identity() * 0.25;
  bad(0, 0) = 0.6;
  bad(1, 1) = -0.1;  // negative eigenvalue beyond tolerance
  CHECK_THROWS_AS((void)fidelity(SpinState(bad), SpinState::ket00()), DomainError);
}

TEST_CASE("identity evolution: zero rates and zero pulse") {
  const IonChain chain = two_ion_chain();
  const Pulse zero = Pulse::symmetric({0.0, 0.0}, 4e-5, kTwoPi * 4e4);
  const NoiseModel noise = NoiseModel::zero(2);
  Eigen::Vector4cd psi;
  psi << 0.5, 0.5, 0.5, -0.5;
  const SpinState in = SpinState::pure(psi);
  const SpinState out = sequential_simulate(in, chain, zero, noise, 0, 1, fast_sim());
  CHECK(trace_distance(in, out) < 1e-10);
}

TEST_CASE("ground state is a fixed point of pure dephasing") {
  const IonChain chain = two_ion_chain();
  const Pulse zero = Pulse::symmetric({0.0, 0.0}, 4e-5, kTwoPi * 4e4);
  NoiseModel noise = NoiseModel::zero(2);
  noise.gamma_deph = {3e3, 2e3};
  const SpinState in = SpinState::ket00();
  const SpinState out = sequential_simulate(in, chain, zero, noise, 0, 1, fast_sim());
  CHECK(trace_distance(in, out) < 1e-10);

  // thermal initial states are diagonal in the Fock basis, also fixed
  SimConfig sim = fast_sim();
  sim.initial_nbar = 0.3;
  const SpinState out_th = sequential_simulate(in, chain, zero, noise, 0, 1, sim);
  CHECK(trace_distance(in, out_th) < 1e-10);
}

TEST_CASE("zero-noise sequential evolution matches the analytic propagator") {
  const IonChain chain = two_ion_chain();
  // short gate so the unit test stays fast
  const double tau = 6e-5;
  const Pulse pulse = optimize_amplitudes(chain, 0, 1, tau, kTwoPi * 5.3e4, 12);
  const NoiseModel noise = NoiseModel::zero(2);
  const SpinState in = SpinState::ket00();
  const SpinState out = sequential_simulate(in, chain, pulse, noise, 0, 1, fast_sim());
  const SpinState expected = analytic_final_state(in, chain, pulse, 0, 1);
  CHECK(trace_distance(out, expected) < 1e-8);

  // the closed pulse realizes exp(-i pi/4 XX)
  const Eigen::Vector4cd target = ideal_xx_gate() * Eigen::Vector4cd::Unit(0);
  CHECK(fidelity(out, SpinState::pure(target)) > 1.0 - 1e-6);
}

TEST_CASE("analytic propagator matches brute force for an open trajectory") {
  // a pulse that does not close: displacement factors genuinely exercised
  const IonChain chain = two_ion_chain();
  const double tau = 5e-5;
  const Pulse pulse = Pulse::from_segments({2.1e5, -0.8e5, 1.4e5, 0.5e5}, tau,
                                           kTwoPi * 6.1e4);
  const NoiseModel noise = NoiseModel::zero(2);
  SimConfig sim = fast_sim(8);
  const SpinState in = SpinState::ket00();
  const SpinState brute = brute_force_simulate(in, chain, pulse, noise, 0, 1, sim);
  const SpinState analytic = analytic_final_state(in, chain, pulse, 0, 1);
  CHECK(trace_distance(brute, analytic) < 1e-8);

  // and with a thermal initial state
  sim.initial_nbar = 0.15;
  sim.fock_cutoff = 10;  // thermal tail needs headroom
  sim.leakage_tol = 1e-4;
  const SpinState brute_th = brute_force_simulate(in, chain, pulse, noise, 0, 1, sim);
  const SpinState analytic_th = analytic_final_state(in, chain, pulse, 0, 1, 0.15);
  // truncated thermal weights differ from the exact geometric series
  CHECK(trace_distance(brute_th, analytic_th) < 1e-6);
}

TEST_CASE("brute force at N = 1 equals the single-mode evolution") {
  TrapConfig cfg;
  cfg.ion_count = 2;  // need two ions for a gate; restrict to one mode via N=2 chain
  const IonChain chain = make_chain(cfg);
  // compare the two code paths on the same 2-ion, mode-0-only problem instead:
  // a genuine N=1 chain cannot host a two-ion gate.
  const Pulse pulse = Pulse::from_segments({1.5e5, 0.9e5}, 3e-5, kTwoPi * 5e4);
  NoiseModel noise = NoiseModel::zero(2);
  noise.gamma_up = {70.0, 0.0};
  noise.gamma_down = {55.0, 0.0};
  SimConfig sim = fast_sim(6);
  const SpinState in = SpinState::ket00();
  const SpinState a = evolve_single_mode(in, chain, pulse, noise, 0, 1, 0, sim);
  // evolving the second (noise-free, far-detuned) mode too barely changes
  // the state; instead check sequential over [0] equals the direct call
  const SpinState b = sequential_simulate(in, chain, pulse, noise, 0, 1, sim, {0, 1});
  const SpinState b0 = evolve_single_mode(a, chain, pulse, noise, 0, 1, 1, sim);
  CHECK(trace_distance(b, b0) < 1e-14);
}

TEST_CASE("sequential equals brute force under noise (small config)") {
  // both paths integrate the same truncated generator, so agreement is not
  // limited by the Fock cutoff: a small one keeps the joint space tiny
  const IonChain chain = two_ion_chain();
  const double tau = 6e-5;
  const Pulse pulse = optimize_amplitudes(chain, 0, 1, tau, kTwoPi * 5.3e4, 12);
  NoiseModel noise = NoiseModel::zero(2);
  noise.gamma_up = {50.0, 100.0};
  noise.gamma_down = {50.0, 100.0};
  SimConfig sim = fast_sim(7);
  sim.leakage_tol = 1e-3;
  const SpinState in = SpinState::ket00();
  const SpinState seq = sequential_simulate(in, chain, pulse, noise, 0, 1, sim);
  const SpinState brute = brute_force_simulate(in, chain, pulse, noise, 0, 1, sim);
  CHECK(trace_distance(seq, brute) < 1e-7);

  // reversed mode order
  const SpinState rev = sequential_simulate(in, chain, pulse, noise, 0, 1, sim, {1, 0});
  CHECK(trace_distance(seq, rev) < 1e-8);
}

TEST_CASE("state invariants hold along a noisy evolution") {
  const IonChain chain = two_ion_chain();
  const Pulse pulse = optimize_amplitudes(chain, 0, 1, 6e-5, kTwoPi * 5.3e4, 12);
  NoiseModel noise = NoiseModel::zero(2);
  noise.gamma_up = {200.0, 150.0};
  noise.gamma_down = {200.0, 150.0};
  noise.gamma_deph = {90.0, 0.0};
  const SpinState out =
      sequential_simulate(SpinState::ket00(), chain, pulse, noise, 0, 1, fast_sim());
  CHECK(out.trace_error() < 1e-9);
  CHECK(out.hermiticity_error() < 1e-10);
  CHECK(out.min_eigenvalue() > -1e-8);
}

TEST_CASE("fock leakage raises a cutoff error") {
  const IonChain chain = two_ion_chain();
  // resonant strong drive on the tilt mode fills the ladder immediately
  const Pulse pulse = Pulse::symmetric({8e5, 8e5}, 1e-4, kTwoPi * 1.0);
  SimConfig sim = fast_sim(3);
  sim.leakage_tol = 1e-4;
  CHECK_THROWS_AS((void)evolve_single_mode(SpinState::ket00(), chain, pulse,
                                           NoiseModel::zero(2), 0, 1, 1, sim),
                  CutoffError);
}

TEST_CASE("brute force memory guard") {
  TrapConfig cfg;
  cfg.ion_count = 3;
  const IonChain chain = make_chain(cfg);
  const Pulse pulse = Pulse::symmetric({1e5, 1e5}, 3e-5, kTwoPi * 5e4);
  SimConfig sim = fast_sim(10);
  sim.memory_budget_bytes = 1 << 20;
  CHECK_THROWS_AS((void)brute_force_simulate(SpinState::ket00(), chain, pulse,
                                             NoiseModel::zero(3), 0, 1, sim),
                  ResourceError);
  TrapConfig cfg4 = cfg;
  cfg4.ion_count = 4;
  const IonChain chain4 = make_chain(cfg4);
  CHECK_THROWS_AS((void)brute_force_simulate(SpinState::ket00(), chain4, pulse,
                                             NoiseModel::zero(4), 0, 1, sim),
                  std::invalid_argument);
}

TEST_CASE("heating-free backends agree") {
  const IonChain chain = two_ion_chain();
  const Pulse pulse = optimize_amplitudes(chain, 0, 1, 6e-5, kTwoPi * 5.3e4, 12);
  const SpinState in = SpinState::ket00();
  const SpinState seq =
      heating_free_simulate(in, chain, pulse, 0, 1, fast_sim(),
                            HeatingFreeBackend::kSequential);
  const SpinState ana = heating_free_simulate(in, chain, pulse, 0, 1, fast_sim(),
                                              HeatingFreeBackend::kAnalytic);
  CHECK(trace_distance(seq, ana) < 1e-8);
}

TEST_CASE("half-amplitude pulse rotates by an eighth of the full angle") {
  const IonChain chain = two_ion_chain();
  const Pulse pulse = optimize_amplitudes(chain, 0, 1, 6e-5, kTwoPi * 5.3e4, 12);
  const Pulse half = pulse.scaled(0.5);
  CHECK(theta(half, chain, 0, 1) == doctest::Approx(kPi / 16.0).epsilon(1e-12));
  // the analytic state for the half pulse equals exp(-i pi/16 XX)|00>
  const SpinState out = analytic_final_state(SpinState::ket00(), chain, half, 0, 1);
  Eigen::Matrix4cd xx = Eigen::Matrix4cd::Zero();
  xx(0, 3) = xx(3, 0) = xx(1, 2) = xx(2, 1) = 1.0;
  const cplx c = std::cos(kPi / 16.0), s = std::sin(kPi / 16.0);
  const Eigen::Vector4cd target =
      (Eigen::Matrix4cd::Identity() * c - cplx(0, 1) * s * xx) *
      Eigen::Vector4cd::Unit(0);
  // residual spin-motion entanglement of the rescaled pulse is negligible only
  // for the closure part; alpha still vanishes since closure is amplitude-linear
  CHECK(fidelity(out, SpinState::pure(target)) > 1.0 - 1e-9);
}

TEST_CASE("step halving certification on a short gate") {
  const IonChain chain = two_ion_chain();
  const Pulse pulse = optimize_amplitudes(chain, 0, 1, 6e-5, kTwoPi * 5.3e4, 12);
  NoiseModel noise = NoiseModel::zero(2);
  noise.gamma_up = {50.0, 100.0};
  noise.gamma_down = {50.0, 100.0};
  const double dist =
      step_halving_distance(SpinState::ket00(), chain, pulse, noise, 0, 1, fast_sim());
  CHECK(dist < 1e-8);
}

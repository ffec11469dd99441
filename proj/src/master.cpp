#include "ionsim/master.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ionsim/errors.hpp"
#include "ionsim/liouville.hpp"
#include "ionsim/segment_integrals.hpp"

namespace ionsim {

void SimConfig::validate() const {
  if (fock_cutoff < 2) throw std::invalid_argument("fock_cutoff must be >= 2");
  if (initial_nbar < 0) throw std::invalid_argument("initial_nbar must be >= 0");
  if (rk_substeps_per_segment < 1 || rk_steps_per_cycle < 1) {
    throw std::invalid_argument("substep counts must be positive");
  }
  if (!(leakage_tol > 0 && leakage_tol < 1)) {
    throw std::invalid_argument("leakage_tol must lie in (0, 1)");
  }
}

namespace {

std::vector<double> thermal_weights(int nc, double nbar) {
  std::vector<double> w(nc);
  if (nbar <= 0.0) {
    w.assign(nc, 0.0);
    w[0] = 1.0;
    return w;
  }
  const double ratio = nbar / (nbar + 1.0);
  double p = 1.0;
  double norm = 0.0;
  for (int n = 0; n < nc; ++n) {
    w[n] = p;
    norm += p;
    p *= ratio;
  }
  for (double& x : w) x /= norm;  // truncated and renormalized
  return w;
}

// rho_spin x thermal x ... x thermal as a flat row-major matrix.
std::vector<cplx> joint_initial_state(const SpinState& rho_spin, const Liouvillian& lv,
                                      double nbar) {
  const int d = lv.dim();
  const auto w = thermal_weights(lv.fock_cutoff(), nbar);
  std::vector<cplx> rho(static_cast<size_t>(d) * d, cplx{0.0, 0.0});
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      bool diag = true;
      double weight = 1.0;
      for (int k = 0; k < lv.mode_count(); ++k) {
        const int nr = lv.fock_of(r, k);
        const int nc = lv.fock_of(c, k);
        if (nr != nc) {
          diag = false;
          break;
        }
        weight *= w[nr];
      }
      if (!diag) continue;
      rho[static_cast<size_t>(r) * d + c] =
          weight * rho_spin.rho()(lv.spin_of(r), lv.spin_of(c));
    }
  }
  return rho;
}

SpinState trace_out_modes(const std::vector<cplx>& rho, const Liouvillian& lv) {
  const int d = lv.dim();
  const int fock_total = d / 4;
  Eigen::Matrix4cd out = Eigen::Matrix4cd::Zero();
  for (int sr = 0; sr < 4; ++sr) {
    for (int sc = 0; sc < 4; ++sc) {
      cplx acc = 0.0;
      for (int f = 0; f < fock_total; ++f) {
        const int r = sr * fock_total + f;
        const int c = sc * fock_total + f;
        acc += rho[static_cast<size_t>(r) * d + c];
      }
      out(sr, sc) = acc;
    }
  }
  return SpinState(out);
}

int substeps_for_segment(const SimConfig& sim, double max_delta, double seg_duration) {
  const double cycles = std::abs(max_delta) * seg_duration / kTwoPi;
  const double resolved = sim.rk_steps_per_cycle * cycles;
  const int need = static_cast<int>(std::ceil(resolved));
  return std::max(sim.rk_substeps_per_segment, std::max(need, 1));
}

// Integrates the joint state over all pulse segments; checks Fock leakage at
// segment boundaries.
void integrate_segments(const Liouvillian& lv, const Pulse& pulse, const SimConfig& sim,
                        std::vector<cplx>& rho) {
  RkWorkspace ws;
  const double max_delta = lv.max_abs_delta();
  const int m = pulse.segment_count();
  for (int seg = 0; seg < m; ++seg) {
    const double t0 = pulse.segment_start(seg);
    const double t1 = pulse.segment_start(seg + 1);
    const int sub = substeps_for_segment(sim, max_delta, t1 - t0);
    rk4_evolve(lv, pulse.amplitude(seg), t0, t1, sub, rho, ws);
    for (int k = 0; k < lv.mode_count(); ++k) {
      const double pop = lv.top_level_population(rho, k);
      if (pop > sim.leakage_tol) {
        throw CutoffError("Fock leakage: top level of mode " + std::to_string(k) +
                          " reached population " + std::to_string(pop) +
                          "; increase fock_cutoff");
      }
    }
  }
}

ModeParams mode_params(const IonChain& chain, const Pulse& pulse, const NoiseModel& noise,
                       int j_a, int j_b, int k) {
  ModeParams mp;
  mp.delta = detuning(pulse, chain, k);
  mp.eta = chain.lamb_dicke[k];
  mp.b_a = chain.b(j_a, k);
  mp.b_b = chain.b(j_b, k);
  mp.gamma_up = noise.gamma_up[k];
  mp.gamma_down = noise.gamma_down[k];
  mp.gamma_deph = noise.gamma_deph[k];
  return mp;
}

void check_gate_ions(const IonChain& chain, int j_a, int j_b) {
  if (j_a < 0 || j_b <= j_a || j_b >= chain.size()) {
    throw std::invalid_argument("gate ion indices must satisfy 0 <= j_a < j_b < N");
  }
}

}  // namespace

SpinState evolve_single_mode(const SpinState& rho_spin, const IonChain& chain,
                             const Pulse& pulse, const NoiseModel& noise, int j_a,
                             int j_b, int k, const SimConfig& sim) {
  sim.validate();
  check_gate_ions(chain, j_a, j_b);
  noise.validate(chain.size());
  rho_spin.validate();
  const Liouvillian lv(sim.fock_cutoff, {mode_params(chain, pulse, noise, j_a, j_b, k)},
                       sim.parallel_kernel);
  std::vector<cplx> rho = joint_initial_state(rho_spin, lv, sim.initial_nbar);
  integrate_segments(lv, pulse, sim, rho);
  return trace_out_modes(rho, lv);
}

SpinState sequential_simulate(const SpinState& rho_spin0, const IonChain& chain,
                              const Pulse& pulse, const NoiseModel& noise, int j_a,
                              int j_b, const SimConfig& sim,
                              const std::vector<int>& mode_order) {
  std::vector<int> order = mode_order;
  if (order.empty()) {
    order.resize(chain.size());
    std::iota(order.begin(), order.end(), 0);
  }
  if (static_cast<int>(order.size()) != chain.size()) {
    throw std::invalid_argument("mode_order must be a permutation of all modes");
  }
  SpinState state = rho_spin0;
  for (int k : order) {
    state = evolve_single_mode(state, chain, pulse, noise, j_a, j_b, k, sim);
  }
  return state;
}

SpinState brute_force_simulate(const SpinState& rho_spin0, const IonChain& chain,
                               const Pulse& pulse, const NoiseModel& noise, int j_a,
                               int j_b, const SimConfig& sim) {
  sim.validate();
  check_gate_ions(chain, j_a, j_b);
  noise.validate(chain.size());
  rho_spin0.validate();
  const int n = chain.size();
  if (n > 3) {
    throw std::invalid_argument("brute-force simulation is limited to N <= 3");
  }
  double fock_total = 1.0;
  for (int k = 0; k < n; ++k) fock_total *= sim.fock_cutoff;
  const double dim = 4.0 * fock_total;
  // state + 5 RK work buffers
  const double bytes = 6.0 * dim * dim * sizeof(cplx);
  if (bytes > static_cast<double>(sim.memory_budget_bytes)) {
    throw ResourceError("brute-force state of dimension " +
                        std::to_string(static_cast<long long>(dim)) + " needs about " +
                        std::to_string(static_cast<long long>(bytes / (1 << 20))) +
                        " MiB, above the configured budget");
  }

  std::vector<ModeParams> params;
  params.reserve(n);
  for (int k = 0; k < n; ++k) {
    params.push_back(mode_params(chain, pulse, noise, j_a, j_b, k));
  }
  const Liouvillian lv(sim.fock_cutoff, std::move(params), sim.parallel_kernel);
  std::vector<cplx> rho = joint_initial_state(rho_spin0, lv, sim.initial_nbar);
  integrate_segments(lv, pulse, sim, rho);
  return trace_out_modes(rho, lv);
}

SpinState heating_free_simulate(const SpinState& rho_spin0, const IonChain& chain,
                                const Pulse& pulse, int j_a, int j_b,
                                const SimConfig& sim, HeatingFreeBackend backend) {
  if (backend == HeatingFreeBackend::kAnalytic) {
    return analytic_final_state(rho_spin0, chain, pulse, j_a, j_b, sim.initial_nbar);
  }
  return sequential_simulate(rho_spin0, chain, pulse, NoiseModel::zero(chain.size()),
                             j_a, j_b, sim);
}

double step_halving_distance(const SpinState& rho_spin0, const IonChain& chain,
                             const Pulse& pulse, const NoiseModel& noise, int j_a,
                             int j_b, const SimConfig& sim) {
  SimConfig doubled = sim;
  doubled.rk_substeps_per_segment *= 2;
  doubled.rk_steps_per_cycle *= 2;
  const SpinState coarse = sequential_simulate(rho_spin0, chain, pulse, noise, j_a, j_b, sim);
  const SpinState fine =
      sequential_simulate(rho_spin0, chain, pulse, noise, j_a, j_b, doubled);
  return trace_distance(coarse, fine);
}

}  // namespace ionsim

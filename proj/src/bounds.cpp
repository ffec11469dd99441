#include "ionsim/bounds.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ionsim/errors.hpp"
#include "ionsim/master.hpp"
#include "ionsim/segment_integrals.hpp"

namespace ionsim {

namespace {

// 32-point Gauss-Legendre nodes/weights on [-1, 1] (symmetric halves).
constexpr int kGlPoints = 32;
constexpr std::array<double, 16> kGlNode = {
    0.0483076656877383162348126, 0.1444719615827964934851864,
    0.2392873622521370745446032, 0.3318686022821276497799168,
    0.4213512761306353453641194, 0.5068999089322293900237475,
    0.5877157572407623290407455, 0.6630442669302152009751152,
    0.7321821187402896803874267, 0.7944837959679424069630973,
    0.8493676137325699701336930, 0.8963211557660521239653072,
    0.9349060759377396891709191, 0.9647622555875064307738119,
    0.9856115115452683354001750, 0.9972638618494815635449811};
constexpr std::array<double, 16> kGlWeight = {
    0.0965400885147278005667648, 0.0956387200792748594190820,
    0.0938443990808045656391802, 0.0911738786957638847128686,
    0.0876520930044038111427715, 0.0833119242269467552221991,
    0.0781938957870703064717409, 0.0723457941088485062253994,
    0.0658222227763618468376501, 0.0586840934785355471452836,
    0.0509980592623761761961632, 0.0428358980222266806568786,
    0.0342738629130214331026877, 0.0253920653092620594557526,
    0.0162743947309056706051706, 0.0070186100094700966004071};

template <typename F>
double gl_panel(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double dx = half * kGlNode[i];
    acc += kGlWeight[i] * (f(mid - dx) + f(mid + dx));
  }
  return acc * half;
}

// integral_0^tau |g_k(t)|^2 dt on composite Gauss-Legendre panels,
// cross-validated against Richardson-extrapolated trapezoid refinement to
// 1e-8 relative.
double trajectory_norm_integral(const Pulse& pulse, const IonChain& chain, int k) {
  const AlphaEvaluator eval(pulse, chain, k);
  const auto f = [&](double t) { return std::norm(eval(t)); };
  const double tau = pulse.duration();
  const int m = pulse.segment_count();
  const double seg = tau / m;
  // |g|^2 oscillates at up to 2 delta; keep panels at <= ~2 cycles each.
  const double cycles = std::abs(eval.delta()) * seg / kPi;
  const int panels_per_seg = std::max(1, static_cast<int>(std::ceil(cycles / 2.0)));

  auto composite = [&](int refine) {
    double acc = 0.0;
    const int p = panels_per_seg * refine;
    for (int s = 0; s < m; ++s) {
      const double a = pulse.segment_start(s);
      for (int i = 0; i < p; ++i) {
        acc += gl_panel(f, a + seg * i / p, a + seg * (i + 1) / p);
      }
    }
    return acc;
  };

  double value = composite(1);

  // Independent validator: composite Simpson refined until stable, starting
  // fine enough to resolve every oscillation of the integrand.
  const double scale = std::abs(value) + 1e-300;
  const double total_cycles = std::abs(eval.delta()) * tau / kPi;
  int n = 1 << 12;
  while (n < 32.0 * total_cycles && n < (1 << 22)) n *= 2;
  auto simpson = [&](int points) {
    double acc = f(0.0) + f(tau);
    for (int i = 1; i < points; ++i) acc += f(tau * i / points) * (i % 2 ? 4.0 : 2.0);
    return acc * tau / (3.0 * points);
  };
  double validator = simpson(n);
  for (int level = 0; level < 6; ++level) {
    n *= 2;
    const double next = simpson(n);
    const bool stable = std::abs(next - validator) < 0.25e-8 * scale;
    validator = next;
    if (stable) break;
  }
  if (std::abs(value - validator) > 1e-8 * std::max(std::abs(validator), 1e-30)) {
    // One refinement retry before giving up.
    value = composite(4);
    if (std::abs(value - validator) > 1e-8 * std::max(std::abs(validator), 1e-30)) {
      throw AccuracyError("trajectory integral quadrature cross-validation failed");
    }
  }
  return value;
}

struct TrajectoryIntegrals {
  std::vector<double> norm;  // integral |g_k|^2 dt per mode
};

TrajectoryIntegrals trajectory_integrals(const Pulse& pulse, const IonChain& chain) {
  TrajectoryIntegrals out;
  out.norm.resize(chain.size());
  for (int k = 0; k < chain.size(); ++k) {
    out.norm[k] = trajectory_norm_integral(pulse, chain, k);
  }
  return out;
}

// Shared core of the improved bound and the heating estimator: the rate per
// mode is supplied by the caller.
double pairwise_bound(const IonChain& chain, const std::vector<double>& rates,
                      const TrajectoryIntegrals& traj, int j_a, int j_b) {
  double total = 0.0;
  for (int j1 : {j_a, j_b}) {
    for (int j2 : {j_a, j_b}) {
      double acc = 0.0;
      for (int k = 0; k < chain.size(); ++k) {
        acc += rates[k] * chain.b(j1, k) * chain.b(j2, k) * traj.norm[k];
      }
      total += std::abs(acc);
    }
  }
  return total;
}

bool pulse_closes(const Pulse& pulse, const IonChain& chain, int j_a, int j_b) {
  const double tau = pulse.duration();
  const double scale = pulse.max_amplitude() * tau;
  for (int k = 0; k < chain.size(); ++k) {
    const AlphaEvaluator eval(pulse, chain, k);
    const double closure = std::abs(eval(tau));
    const double ref = 0.5 * chain.lamb_dicke[k] * scale;
    if (closure > 1e-6 * std::max(ref, 1e-300)) return false;
  }
  return true;
}

}  // namespace

double simple_bound(const NoiseModel& noise, double tau) {
  double acc = 0.0;
  for (int k = 0; k < noise.modes(); ++k) {
    acc += noise.gamma_up[k] + noise.gamma_down[k] + 0.25 * noise.gamma_deph[k];
  }
  return acc * tau;
}

double improved_bound(const Pulse& pulse, const IonChain& chain, const NoiseModel& noise,
                      int j_a, int j_b) {
  noise.validate(chain.size());
  std::vector<double> rates(chain.size());
  for (int k = 0; k < chain.size(); ++k) {
    rates[k] = noise.gamma_up[k] + noise.gamma_down[k] + noise.gamma_deph[k];
  }
  return pairwise_bound(chain, rates, trajectory_integrals(pulse, chain), j_a, j_b);
}

double heating_estimator(const Pulse& pulse, const IonChain& chain,
                         const NoiseModel& noise, int j_a, int j_b) {
  noise.validate(chain.size());
  return pairwise_bound(chain, noise.gamma_up, trajectory_integrals(pulse, chain), j_a,
                        j_b);
}

double trajectory_diag_a(const Pulse& pulse, const IonChain& chain, int j_a, int j_b) {
  const TrajectoryIntegrals traj = trajectory_integrals(pulse, chain);
  double total = 0.0;
  for (int j1 : {j_a, j_b}) {
    for (int j2 : {j_a, j_b}) {
      for (int k = 0; k < chain.size(); ++k) {
        total += std::abs(chain.b(j1, k) * chain.b(j2, k)) * traj.norm[k];
      }
    }
  }
  return total;
}

double loose_bound(const Pulse& pulse, const IonChain& chain, const NoiseModel& noise,
                   int j_a, int j_b) {
  noise.validate(chain.size());
  (void)j_a;
  (void)j_b;  // the inner integral is ion independent (identical pulses)
  const TrajectoryIntegrals traj = trajectory_integrals(pulse, chain);
  double worst = 0.0;
  for (int k = 0; k < chain.size(); ++k) {
    const double rate =
        noise.gamma_up[k] + noise.gamma_down[k] + noise.gamma_deph[k];
    // eta^2 integral |integral Omega e^{-i d t1} dt1|^2 dt = 4 integral |g_k|^2 dt
    worst = std::max(worst, rate * 4.0 * traj.norm[k]);
  }
  return worst;
}

double scaling_estimate(double omega_max, double eta_max, double gamma_max, double tau) {
  return omega_max * omega_max * eta_max * gamma_max * tau * tau * tau;
}

double freq_drift_delta(const Pulse& pulse, const IonChain& chain, int j_a, int j_b,
                        double xi_omega) {
  const double slope = theta_detuning_derivative(pulse, chain, j_a, j_b);
  return xi_omega * xi_omega * slope * slope;
}

double theta_drifted(const Pulse& pulse, const IonChain& chain, int j_a, int j_b,
                     double xi_omega) {
  return theta(pulse, chain, j_a, j_b, xi_omega);
}

double freq_drift_exact(const Pulse& pulse, const IonChain& chain, int j_a, int j_b,
                        double xi_omega) {
  const double t0 = theta(pulse, chain, j_a, j_b);
  const double t1 = theta_drifted(pulse, chain, j_a, j_b, xi_omega);
  return (t0 - t1) * (t0 - t1);
}

double freq_drift_state_infidelity(const Pulse& pulse, const IonChain& chain, int j_a,
                                   int j_b, double xi_omega, const SpinState& rho0,
                                   double nbar) {
  const SpinState ideal = analytic_final_state(rho0, chain, pulse, j_a, j_b, nbar);
  const SpinState drifted =
      analytic_final_state(rho0, chain, pulse, j_a, j_b, nbar, xi_omega);
  return 1.0 - fidelity(drifted, ideal);
}

double rabi_drift_infidelity(double xi_rabi) {
  return 0.25 * kPi * kPi * xi_rabi * xi_rabi;
}

double rabi_drift_exact(double xi_rabi) {
  const double theta0 = 0.25 * kPi;
  const double drifted = (1.0 + xi_rabi) * (1.0 + xi_rabi) * theta0;
  return (theta0 - drifted) * (theta0 - drifted);
}

ErrorReport make_report(const Pulse& pulse, const IonChain& chain, const NoiseModel& noise,
                        int j_a, int j_b, std::optional<double> simulated_infidelity) {
  ErrorReport report;
  report.simple_bound = simple_bound(noise, pulse.duration());
  report.improved_bound = improved_bound(pulse, chain, noise, j_a, j_b);
  report.loose_bound = loose_bound(pulse, chain, noise, j_a, j_b);
  report.heating_estimator = heating_estimator(pulse, chain, noise, j_a, j_b);
  report.trajectory_diag_a = trajectory_diag_a(pulse, chain, j_a, j_b);
  report.simulated_infidelity = simulated_infidelity;
  if (!pulse_closes(pulse, chain, j_a, j_b)) {
    report.warnings.push_back(
        "pulse trajectories do not return to the origin (alpha(tau) != 0); the "
        "improved bound assumes a well-optimized pulse");
  }
  return report;
}

}  // namespace ionsim

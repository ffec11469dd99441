#include "ionsim/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "ionsim/errors.hpp"
#include "ionsim/segment_integrals.hpp"

namespace ionsim {

namespace {

void check_pulse_args(int n_segments, double duration) {
  if (n_segments <= 0 || n_segments % 2 != 0) {
    throw std::invalid_argument("segment count must be positive and even");
  }
  if (!(duration > 0)) throw std::invalid_argument("pulse duration must be positive");
}

}  // namespace

Pulse::Pulse(std::vector<double> amps, double duration, double delta_min, bool symmetric)
    : amps_(std::move(amps)), duration_(duration), delta_min_(delta_min),
      symmetric_(symmetric) {}

Pulse Pulse::symmetric(std::vector<double> half_amplitudes, double duration,
                       double delta_min) {
  const int half = static_cast<int>(half_amplitudes.size());
  check_pulse_args(2 * half, duration);
  std::vector<double> amps(2 * half);
  for (int i = 0; i < half; ++i) {
    amps[i] = half_amplitudes[i];
    amps[2 * half - 1 - i] = half_amplitudes[i];
  }
  return Pulse(std::move(amps), duration, delta_min, true);
}

Pulse Pulse::from_segments(std::vector<double> amplitudes, double duration,
                           double delta_min) {
  const int m = static_cast<int>(amplitudes.size());
  check_pulse_args(m, duration);
  bool sym = true;
  for (int i = 0; i < m / 2; ++i) sym &= amplitudes[i] == amplitudes[m - 1 - i];
  return Pulse(std::move(amplitudes), duration, delta_min, sym);
}

double Pulse::max_amplitude() const {
  double m = 0.0;
  for (double a : amps_) m = std::max(m, std::abs(a));
  return m;
}

Pulse Pulse::scaled(double factor) const {
  std::vector<double> amps = amps_;
  for (double& a : amps) a *= factor;
  return Pulse(std::move(amps), duration_, delta_min_, symmetric_);
}

double detuning(const Pulse& pulse, const IonChain& chain, int k, double shift) {
  return chain.mode_freqs[k] - pulse.mu(chain) + shift;
}

AlphaEvaluator::AlphaEvaluator(const Pulse& pulse, const IonChain& chain, int k,
                               double shift)
    : pulse_(pulse),
      delta_(detuning(pulse, chain, k, shift)),
      prefactor_(0.5 * chain.lamb_dicke[k]) {
  const int m = pulse.segment_count();
  prefix_.resize(m + 1);
  prefix_[0] = 0.0;
  for (int i = 0; i < m; ++i) {
    prefix_[i + 1] = prefix_[i] + pulse.amplitude(i) * seg::exp_moment0(
                                      delta_, pulse.segment_start(i),
                                      pulse.segment_start(i + 1));
  }
}

cplx AlphaEvaluator::operator()(double t) const {
  const int m = pulse_.segment_count();
  const double tau = pulse_.duration();
  if (t <= 0.0) return 0.0;
  if (t >= tau) return prefactor_ * prefix_[m];
  const int idx = std::min(static_cast<int>(t * m / tau), m - 1);
  const cplx partial =
      pulse_.amplitude(idx) * seg::exp_moment0(delta_, pulse_.segment_start(idx), t);
  return prefactor_ * (prefix_[idx] + partial);
}

cplx alpha_at(const Pulse& pulse, const IonChain& chain, int j, int k, double t,
              double shift) {
  if (t < -1e-18 || t > pulse.duration() * (1.0 + 1e-12)) {
    throw std::invalid_argument("alpha_at time outside [0, tau]");
  }
  return chain.b(j, k) * AlphaEvaluator(pulse, chain, k, shift)(t);
}

cplx alpha_time_average(const Pulse& pulse, const IonChain& chain, int j, int k,
                        double shift) {
  // integral_0^tau alpha(t) dt = prefactor * integral_0^tau (tau - s) Omega(s) e^{i d s} ds
  const double delta = detuning(pulse, chain, k, shift);
  const double tau = pulse.duration();
  cplx acc = 0.0;
  for (int m = 0; m < pulse.segment_count(); ++m) {
    const double a = pulse.segment_start(m);
    const double b = pulse.segment_start(m + 1);
    acc += pulse.amplitude(m) *
           (tau * seg::exp_moment0(delta, a, b) - seg::exp_moment1(delta, a, b));
  }
  return 0.5 * chain.lamb_dicke[k] * chain.b(j, k) * acc;
}

namespace {

// Theta as a quadratic form over the full segment amplitudes:
//   Theta = Omega^T Q Omega,
// Q built from the exact per-segment-pair integrals of the sin kernel.
// Sign convention: theta is the angle of the realized gate exp(-i theta sx sx),
// which makes theta positive for the red-detuned pulses synthesized here.
Eigen::MatrixXd theta_quadratic_form(const Pulse& pulse, const IonChain& chain, int j_a,
                                     int j_b, double shift) {
  const int m = pulse.segment_count();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < chain.size(); ++k) {
    const double delta = detuning(pulse, chain, k, shift);
    const double eta = chain.lamb_dicke[k];
    const double w = -0.5 * eta * eta * chain.b(j_a, k) * chain.b(j_b, k);
    std::vector<cplx> e0(m);
    for (int i = 0; i < m; ++i) {
      e0[i] = seg::exp_moment0(delta, pulse.segment_start(i), pulse.segment_start(i + 1));
    }
    for (int i = 0; i < m; ++i) {
      q(i, i) += w * seg::ordered_sin_diag(delta, pulse.segment_start(i),
                                           pulse.segment_start(i + 1));
      for (int j = 0; j < i; ++j) {
        const double off = std::imag(e0[i] * std::conj(e0[j]));
        q(i, j) += 0.5 * w * off;
        q(j, i) += 0.5 * w * off;
      }
    }
  }
  return q;
}

Eigen::VectorXd amplitudes_vector(const Pulse& pulse) {
  Eigen::VectorXd v(pulse.segment_count());
  for (int i = 0; i < pulse.segment_count(); ++i) v[i] = pulse.amplitude(i);
  return v;
}

}  // namespace

double theta(const Pulse& pulse, const IonChain& chain, int j_a, int j_b, double shift) {
  const Eigen::MatrixXd q = theta_quadratic_form(pulse, chain, j_a, j_b, shift);
  const Eigen::VectorXd v = amplitudes_vector(pulse);
  return v.dot(q * v);
}

double theta_detuning_derivative(const Pulse& pulse, const IonChain& chain, int j_a,
                                 int j_b) {
  const int m = pulse.segment_count();
  const Eigen::VectorXd v = amplitudes_vector(pulse);
  double acc = 0.0;
  for (int k = 0; k < chain.size(); ++k) {
    const double delta = detuning(pulse, chain, k);
    const double eta = chain.lamb_dicke[k];
    // same sign convention as theta_quadratic_form
    const double w = -0.5 * eta * eta * chain.b(j_a, k) * chain.b(j_b, k);
    std::vector<cplx> e0(m), e1(m);
    for (int i = 0; i < m; ++i) {
      const double a = pulse.segment_start(i);
      const double b = pulse.segment_start(i + 1);
      e0[i] = seg::exp_moment0(delta, a, b);
      e1[i] = seg::exp_moment1(delta, a, b);
    }
    double mode_acc = 0.0;
    for (int i = 0; i < m; ++i) {
      mode_acc += v[i] * v[i] *
                  seg::ordered_cos_dt_diag(delta, pulse.segment_start(i),
                                           pulse.segment_start(i + 1));
      for (int j = 0; j < i; ++j) {
        // integral over t1 in segment i, t2 in segment j of cos(d (t1-t2)) (t1-t2)
        const double off = std::real(e1[i] * std::conj(e0[j]) - e0[i] * std::conj(e1[j]));
        mode_acc += v[i] * v[j] * off;
      }
    }
    acc += w * mode_acc;
  }
  return acc;
}

Pulse optimize_amplitudes(const IonChain& chain, int j_a, int j_b, double tau,
                          double delta_min, int n_segments, ConstraintSet constraints) {
  const int n = chain.size();
  if (n_segments <= 0 || n_segments % 2 != 0) {
    throw std::invalid_argument("n_segments must be positive and even");
  }
  if (!(tau > 0) || !(delta_min > 0)) {
    throw std::invalid_argument("tau and delta_min must be positive");
  }
  if (j_a < 0 || j_b <= j_a || j_b >= n) {
    throw std::invalid_argument("gate ion indices must satisfy 0 <= j_a < j_b < N");
  }
  const int half = n_segments / 2;
  const int needed = constraints == ConstraintSet::kRobust ? 2 * n : n;
  if (half <= needed) {
    throw InfeasibleError("pulse synthesis infeasible: " + std::to_string(half) +
                          " free amplitudes for " + std::to_string(needed) +
                          " constraints; increase n_segments");
  }

  // Reference pulse (unit amplitudes) to reuse the detuning/geometry helpers.
  const Pulse unit = Pulse::symmetric(std::vector<double>(half, 1.0), tau, delta_min);

  // Modes that do not couple to either gate ion are skipped; their trajectory
  // is identically zero whatever the pulse does.
  std::vector<int> active;
  for (int k = 0; k < n; ++k) {
    if (std::abs(chain.b(j_a, k)) > 1e-14 || std::abs(chain.b(j_b, k)) > 1e-14) {
      active.push_back(k);
    }
  }

  const int rows = static_cast<int>(active.size()) *
                   (constraints == ConstraintSet::kRobust ? 2 : 1);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(rows, half);
  int row = 0;
  for (int k : active) {
    const double delta = detuning(unit, chain, k);
    if (constraints == ConstraintSet::kRobust) {
      // integral_0^tau alpha dt = 0: complex row over the half amplitudes, the
      // mirror segment folded in.
      for (int i = 0; i < half; ++i) {
        cplx w = 0.0;
        for (int s : {i, n_segments - 1 - i}) {
          const double a = unit.segment_start(s);
          const double b = unit.segment_start(s + 1);
          w += tau * seg::exp_moment0(delta, a, b) - seg::exp_moment1(delta, a, b);
        }
        c(row, i) = std::real(w);
        c(row + 1, i) = std::imag(w);
      }
      row += 2;
    } else {
      // alpha(tau) = 0: one real row per mode, since for a symmetric pulse the
      // full integral equals e^{i delta tau / 2} times a real number.
      const cplx rot = seg::cis(-0.5 * delta * tau);
      for (int i = 0; i < half; ++i) {
        const double a = unit.segment_start(i);
        const double b = unit.segment_start(i + 1);
        c(row, i) = 2.0 * std::real(rot * seg::exp_moment0(delta, a, b));
      }
      row += 1;
    }
  }
  c.conservativeResize(row, half);
  for (int r = 0; r < c.rows(); ++r) {
    const double norm = c.row(r).norm();
    if (norm > 0) c.row(r) /= norm;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-10 * smax) ++rank;
  }
  const int null_dim = half - rank;
  if (null_dim <= 0) {
    throw InfeasibleError("pulse synthesis infeasible: constraint matrix has full "
                          "column rank; increase n_segments");
  }
  const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(null_dim);

  // Fold the full M x M Theta form onto the half amplitudes, then onto the
  // null space, and take the most positive eigenvalue (Theta(-v) = Theta(v),
  // so only the positive branch can be rescaled to +pi/4).
  const Eigen::MatrixXd q_full = theta_quadratic_form(unit, chain, j_a, j_b, 0.0);
  Eigen::MatrixXd fold = Eigen::MatrixXd::Zero(n_segments, half);
  for (int i = 0; i < half; ++i) {
    fold(i, i) = 1.0;
    fold(n_segments - 1 - i, i) = 1.0;
  }
  const Eigen::MatrixXd q_half = fold.transpose() * q_full * fold;
  const Eigen::MatrixXd q_proj =
      null_basis.transpose() * q_half * null_basis;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q_proj);
  const auto& evals = eig.eigenvalues();
  const double lambda_max = evals[null_dim - 1];
  if (!(lambda_max > 1e-18)) {
    throw DegeneratePulseError(
        "pulse synthesis degenerate: attainable entangling angle is numerically zero");
  }

  // Deterministic pick among (near-)degenerate top eigenvectors: sign-normalize
  // each candidate, then take the lexicographically largest.
  auto sign_normalized = [&](int idx) {
    Eigen::VectorXd v = null_basis * eig.eigenvectors().col(idx);
    for (int i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-9) {
        if (v[i] < 0) v = -v;
        break;
      }
    }
    return v;
  };
  Eigen::VectorXd best = sign_normalized(null_dim - 1);
  for (int idx = null_dim - 2; idx >= 0; --idx) {
    if (evals[idx] < lambda_max * (1.0 - 1e-12)) break;
    const Eigen::VectorXd cand = sign_normalized(idx);
    for (int i = 0; i < best.size(); ++i) {
      if (cand[i] != best[i]) {
        if (cand[i] > best[i]) best = cand;
        break;
      }
    }
  }

  const double theta_unit = best.dot(q_half * best);
  const double scale = std::sqrt(kPi / (4.0 * theta_unit));
  std::vector<double> amps(half);
  for (int i = 0; i < half; ++i) amps[i] = scale * best[i];
  return Pulse::symmetric(std::move(amps), tau, delta_min);
}

ModeTrajectory sample_trajectory(const Pulse& pulse, const IonChain& chain, int j, int k,
                                 int n_samples) {
  ModeTrajectory traj;
  traj.mode = k;
  traj.ion = j;
  const AlphaEvaluator eval(pulse, chain, k);
  const double b = chain.b(j, k);
  traj.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double t = pulse.duration() * i / (n_samples - 1);
    traj.samples.emplace_back(t, b * eval(t));
  }
  return traj;
}

}  // namespace ionsim

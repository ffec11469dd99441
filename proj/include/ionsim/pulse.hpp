#pragma once

#include <complex>
#include <vector>

#include "ionsim/chain.hpp"

namespace ionsim {

using cplx = std::complex<double>;

// Piecewise-constant amplitude-modulated pulse on a uniform time grid,
// applied identically to both gate ions.  The laser frequency is stored as
// the detuning gap delta_min below the lowest transverse mode:
//   mu = min_k omega_k - delta_min.
class Pulse {
 public:
  // Mirror-symmetric pulse from the first M/2 amplitudes (Omega_m = Omega_{M-1-m}).
  static Pulse symmetric(std::vector<double> half_amplitudes, double duration,
                         double delta_min);
  // General pulse; the symmetry flag is set when the mirror condition holds exactly.
  static Pulse from_segments(std::vector<double> amplitudes, double duration,
                             double delta_min);

  int segment_count() const { return static_cast<int>(amps_.size()); }
  double duration() const { return duration_; }
  double delta_min() const { return delta_min_; }
  bool is_symmetric() const { return symmetric_; }
  double amplitude(int m) const { return amps_[m]; }
  const std::vector<double>& segments() const { return amps_; }
  double segment_start(int m) const { return duration_ * m / segment_count(); }
  double max_amplitude() const;

  double mu(const IonChain& chain) const { return chain.min_freq() - delta_min_; }

  Pulse scaled(double factor) const;

 private:
  Pulse(std::vector<double> amps, double duration, double delta_min, bool symmetric);

  std::vector<double> amps_;
  double duration_;
  double delta_min_;
  bool symmetric_;
};

// Rotating-frame detuning of mode k, optionally shifted by a quasi-static
// drift xi (omega_k -> omega_k + xi, or equivalently mu -> mu - xi).
double detuning(const Pulse& pulse, const IonChain& chain, int k, double shift = 0.0);

// Incremental evaluator of the phase-space trajectory
//   g_k(t) = (eta_k / 2) integral_0^t Omega(s) e^{i delta_k s} ds,
// so that alpha_j^k(t) = b_j^k g_k(t).  Construction is O(M), evaluation O(1).
class AlphaEvaluator {
 public:
  AlphaEvaluator(const Pulse& pulse, const IonChain& chain, int k, double shift = 0.0);
  cplx operator()(double t) const;
  double delta() const { return delta_; }

 private:
  const Pulse& pulse_;
  double delta_;
  double prefactor_;
  std::vector<cplx> prefix_;  // value at segment starts
};

// alpha_j^k(t) for 0 <= t <= tau (Hamiltonian-frame displacement of mode k
// driven through ion j).
cplx alpha_at(const Pulse& pulse, const IonChain& chain, int j, int k, double t,
              double shift = 0.0);

// integral_0^tau alpha_j^k(t) dt in closed form.
cplx alpha_time_average(const Pulse& pulse, const IonChain& chain, int j, int k,
                        double shift = 0.0);

// Accumulated XX rotation angle Theta(tau), exact for piecewise-constant pulses.
double theta(const Pulse& pulse, const IonChain& chain, int j_a, int j_b,
             double shift = 0.0);

// d Theta / d xi for a common shift delta_k -> delta_k + xi of all detunings,
// evaluated at xi = 0.  Exact per segment pair.
double theta_detuning_derivative(const Pulse& pulse, const IonChain& chain, int j_a,
                                 int j_b);

enum class ConstraintSet {
  kRobust,       // symmetric pulse with zero time-averaged trajectory per mode
  kClosureOnly,  // symmetric pulse with alpha_j^k(tau) = 0 only (drift-sensitive)
};

// Synthesizes a symmetric pulse scaled to Theta = pi/4.  The linear
// constraints (2N real rows for kRobust, N for kClosureOnly) are solved by an
// SVD null-space basis; within the null space the Theta quadratic form is
// maximized per unit amplitude norm and the result rescaled.
// Throws InfeasibleError when the null space is empty and DegeneratePulseError
// when the attainable Theta is numerically zero.
Pulse optimize_amplitudes(const IonChain& chain, int j_a, int j_b, double tau,
                          double delta_min, int n_segments,
                          ConstraintSet constraints = ConstraintSet::kRobust);

struct ModeTrajectory {
  int mode = 0;
  int ion = 0;
  std::vector<std::pair<double, cplx>> samples;  // (t seconds, alpha)
};

ModeTrajectory sample_trajectory(const Pulse& pulse, const IonChain& chain, int j, int k,
                                 int n_samples);

}  // namespace ionsim

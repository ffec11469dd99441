#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace ionsim {

using cplx = std::complex<double>;

// One motional mode coupled to the two gate spins.
struct ModeParams {
  double delta = 0.0;       // rotating-frame detuning, rad/s
  double eta = 0.0;         // Lamb-Dicke parameter
  double b_a = 0.0;         // mode-vector component at ion j_a
  double b_b = 0.0;         // at ion j_b
  double gamma_up = 0.0;    // phonons/s
  double gamma_down = 0.0;  // phonons/s
  double gamma_deph = 0.0;  // 1/s
};

// Lindblad generator on the joint space (two gate spins) x (1..3 modes), each
// mode truncated at `fock_cutoff` levels.  The density matrix is stored as a
// flat row-major dim x dim complex vector; basis index = sigma * Nc^m + sum_k
// n_k * stride_k with the spin index slowest.
//
// The Hamiltonian is
//   H_k(t) = (i/2) Omega(t) eta_k (a_k^dag e^{+i delta_k t} - a_k e^{-i delta_k t})
//            (b_a sigma^x_a + b_b sigma^x_b),
// under which the noise-free gate realizes exp(-i theta sx sx) with the
// theta > 0 that theta() reports for the synthesized red-detuned pulses.
//
// apply() is the hot kernel: a fused pass over rows (OpenMP-parallel when
// enabled), bit-identical to the serial path for any thread count.
class Liouvillian {
 public:
  Liouvillian(int fock_cutoff, std::vector<ModeParams> modes, bool parallel);

  int dim() const { return dim_; }
  int fock_cutoff() const { return nc_; }
  int mode_count() const { return static_cast<int>(modes_.size()); }
  const std::vector<ModeParams>& modes() const { return modes_; }
  bool parallel() const { return parallel_; }
  double max_abs_delta() const;

  // out = -i [H(t), in] + dissipators(in); `omega` is the Rabi amplitude of
  // the current segment.
  void apply(double t, double omega, const cplx* in, cplx* out) const;

  // Population of the top Fock level of mode k (sum of the corresponding
  // diagonal elements).
  double top_level_population(const std::vector<cplx>& rho, int k) const;

  // Fock occupation of mode k at flat basis index i.
  int fock_of(int index, int k) const { return (index / stride_[k]) % nc_; }
  int spin_of(int index) const { return index / spin_stride_; }

 private:
  int nc_;
  int dim_;
  int spin_stride_;
  bool parallel_;
  std::vector<ModeParams> modes_;
  std::vector<int> stride_;

  // Per-mode, per-index tables (all time independent).
  std::vector<std::vector<double>> sqrt_n_;    // sqrt(n_k), 0 at n = 0
  std::vector<std::vector<double>> sqrt_np1_;  // sqrt(n_k + 1), 0 at the top level
  std::vector<std::vector<int>> col_up_a_;     // spin-a flip and n_k + 1, clamped
  std::vector<std::vector<int>> col_up_b_;
  std::vector<std::vector<int>> col_dn_a_;
  std::vector<std::vector<int>> col_dn_b_;
  std::vector<std::vector<int>> col_shift_up_;  // n_k + 1, no spin flip, clamped
  std::vector<std::vector<int>> col_shift_dn_;
  std::vector<double> decay_;  // full dim x dim anticommutator + dephasing weight
  std::vector<int> flip_a_;    // basis index with gate-qubit a flipped
  std::vector<int> flip_b_;
};

struct RkWorkspace {
  std::vector<cplx> k1, k2, k3, k4, stage;
  void resize(size_t n);
};

// Classic fixed-step RK4 over [t0, t1] with constant Rabi amplitude `omega`.
void rk4_evolve(const Liouvillian& lv, double omega, double t0, double t1, int substeps,
                std::vector<cplx>& state, RkWorkspace& ws);

// Slow, obviously-correct evaluation of the same generator through dense
// operator algebra.  Reference implementation for kernel tests and the
// benchmark; O(dim^3) per call.
Eigen::MatrixXcd reference_apply(const Liouvillian& lv, double t, double omega,
                                 const Eigen::MatrixXcd& rho);

}  // namespace ionsim

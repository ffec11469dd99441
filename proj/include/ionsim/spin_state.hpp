#pragma once

#include <complex>

#include <Eigen/Dense>

namespace ionsim {

// Two-qubit density matrix over the computational basis {|00>, |01>, |10>, |11>},
// first label = ion j_a, second = ion j_b.
class SpinState {
 public:
  SpinState() : rho_(Eigen::Matrix4cd::Zero()) {}
  explicit SpinState(const Eigen::Matrix4cd& rho) : rho_(rho) {}

  static SpinState ket00();
  static SpinState pure(const Eigen::Vector4cd& psi);

  const Eigen::Matrix4cd& rho() const { return rho_; }
  Eigen::Matrix4cd& rho() { return rho_; }

  double trace_error() const;        // |tr rho - 1|
  double hermiticity_error() const;  // max |rho - rho^dag|
  double min_eigenvalue() const;

  // Throws DomainError when the state violates the Hermiticity / trace /
  // positivity tolerances (1e-10, 1e-10, -1e-8).
  void validate() const;

 private:
  Eigen::Matrix4cd rho_;
};

// Uhlmann fidelity (tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2.
double fidelity(const SpinState& rho1, const SpinState& rho2);

// (1/2) || rho1 - rho2 ||_1.
double trace_distance(const SpinState& rho1, const SpinState& rho2);

}  // namespace ionsim

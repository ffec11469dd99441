#include "ionsim/spin_state.hpp"

#include <algorithm>
#include <cmath>

#include "ionsim/errors.hpp"

namespace ionsim {

SpinState SpinState::ket00() {
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  psi[0] = 1.0;
  return pure(psi);
}

SpinState SpinState::pure(const Eigen::Vector4cd& psi) {
  const Eigen::Vector4cd n = psi / psi.norm();
  return SpinState(n * n.adjoint());
}

double SpinState::trace_error() const { return std::abs(rho_.trace() - 1.0); }

double SpinState::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double SpinState::min_eigenvalue() const {
  const Eigen::Matrix4cd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(herm);
  return eig.eigenvalues().minCoeff();
}

void SpinState::validate() const {
  if (hermiticity_error() > 1e-10) throw DomainError("spin state is not Hermitian");
  if (trace_error() > 1e-10) throw DomainError("spin state trace differs from 1");
  if (min_eigenvalue() < -1e-8) throw DomainError("spin state is not positive");
}

namespace {

Eigen::Matrix4cd matrix_sqrt_psd(const Eigen::Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(0.5 * (m + m.adjoint()));
  Eigen::Vector4d vals = eig.eigenvalues();
  for (int i = 0; i < 4; ++i) vals[i] = std::sqrt(std::max(vals[i], 0.0));
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

double fidelity(const SpinState& rho1, const SpinState& rho2) {
  rho1.validate();
  rho2.validate();
  const Eigen::Matrix4cd s1 = matrix_sqrt_psd(rho1.rho());
  const Eigen::Matrix4cd inner = s1 * rho2.rho() * s1;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(0.5 * (inner + inner.adjoint()));
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += std::sqrt(std::max(eig.eigenvalues()[i], 0.0));
  return std::min(acc * acc, 1.0);
}

double trace_distance(const SpinState& rho1, const SpinState& rho2) {
  const Eigen::Matrix4cd d = rho1.rho() - rho2.rho();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(0.5 * (d + d.adjoint()));
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace ionsim

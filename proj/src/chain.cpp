#include "ionsim/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ionsim/errors.hpp"

namespace ionsim {

void TrapConfig::validate_gate_ions() const {
  const auto [ja, jb] = gate_ions;
  if (!(0 <= ja && ja < jb && jb < ion_count)) {
    throw std::invalid_argument("gate_ions must satisfy 0 <= j_a < j_b < N, got (" +
                                std::to_string(ja) + ", " + std::to_string(jb) + ") with N = " +
                                std::to_string(ion_count));
  }
}

double length_scale(const TrapConfig& cfg) {
  const double coulomb = kElementaryCharge * kElementaryCharge /
                         (4.0 * kPi * kVacuumPermittivity);
  return std::cbrt(coulomb / (cfg.ion_mass * cfg.omega_z * cfg.omega_z));
}

namespace {

// Force on ion i in dimensionless units (lengths in ell, forces in m wz^2 ell):
//   F_i = -u_i + sum_{j != i} sign(u_i - u_j) / (u_i - u_j)^2
Eigen::VectorXd dimensionless_force(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd f = -u;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = u[i] - u[j];
      f[i] += (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  }
  return f;
}

// Jacobian of the force (negative Hessian of the potential).
Eigen::MatrixXd force_jacobian(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = -1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double c = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
      diag -= c;
      jac(i, j) = c;
    }
    jac(i, i) = diag;
  }
  return jac;
}

}  // namespace

std::vector<double> equilibrium_positions(const TrapConfig& cfg) {
  const int n = cfg.ion_count;
  if (n < 1) throw std::invalid_argument("ion_count must be >= 1");
  if (!(cfg.omega_z > 0)) throw std::invalid_argument("omega_z must be positive");
  if (n == 1) return {0.0};

  // Uniform initial spacing; the 0.56 exponent tracks the known shrinkage of
  // the minimal spacing with N well enough for Newton to converge.
  Eigen::VectorXd u(n);
  const double d0 = 2.0 * 1.75 / std::pow(n, 0.56);
  for (int i = 0; i < n; ++i) u[i] = (i - 0.5 * (n - 1)) * d0;

  constexpr int kMaxIter = 200;
  constexpr double kTol = 1e-13;
  double residual = 0.0;
  bool converged = false;
  for (int iter = 0; iter < kMaxIter; ++iter) {
    const Eigen::VectorXd f = dimensionless_force(u);
    residual = f.lpNorm<Eigen::Infinity>();
    if (residual < kTol) {
      converged = true;
      break;
    }
    const Eigen::VectorXd step = force_jacobian(u).partialPivLu().solve(-f);
    // Backtrack until the residual decreases and the ordering is preserved.
    double lambda = 1.0;
    for (int bt = 0; bt < 40; ++bt) {
      Eigen::VectorXd trial = u + lambda * step;
      bool ordered = true;
      for (int i = 0; i + 1 < n; ++i) ordered &= trial[i] < trial[i + 1];
      if (ordered && dimensionless_force(trial).lpNorm<Eigen::Infinity>() < residual) {
        u = trial;
        break;
      }
      lambda *= 0.5;
    }
  }
  if (!converged) {
    throw ConvergenceError("equilibrium solver did not converge; residual = " +
                               std::to_string(residual),
                           residual);
  }

  // The exact solution is antisymmetric; symmetrize to remove solver drift.
  Eigen::VectorXd sym(n);
  for (int i = 0; i < n; ++i) sym[i] = 0.5 * (u[i] - u[n - 1 - i]);
  const double ell = length_scale(cfg);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = sym[i] * ell;
  return out;
}

double equilibrium_residual(const TrapConfig& cfg, const std::vector<double>& positions) {
  const double ell = length_scale(cfg);
  Eigen::VectorXd u(positions.size());
  for (size_t i = 0; i < positions.size(); ++i) u[i] = positions[i] / ell;
  if (positions.size() == 1) return std::abs(u[0]);
  return dimensionless_force(u).lpNorm<Eigen::Infinity>();
}

std::pair<std::vector<double>, Eigen::MatrixXd> transverse_modes(
    const TrapConfig& cfg, const std::vector<double>& positions) {
  const int n = cfg.ion_count;
  if (static_cast<int>(positions.size()) != n) {
    throw std::invalid_argument("positions size does not match ion_count");
  }
  if (n == 1) {
    Eigen::MatrixXd b(1, 1);
    b(0, 0) = 1.0;
    return {{cfg.omega_x}, b};
  }

  const double ell = length_scale(cfg);
  const double wx2 = cfg.omega_x * cfg.omega_x;
  const double wz2 = cfg.omega_z * cfg.omega_z;

  // K_ij = wx^2 delta_ij - wz^2 C_ij with C the (PSD) Coulomb coupling matrix.
  Eigen::MatrixXd kmat = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = wx2;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double inv3 = 1.0 / std::pow(std::abs((positions[i] - positions[j]) / ell), 3);
      diag -= wz2 * inv3;
      kmat(i, j) = wz2 * inv3;
    }
    kmat(i, i) = diag;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(kmat);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("transverse mode eigensolver failed");
  }

  // Eigen returns ascending eigenvalues; we want descending (COM first).
  std::vector<double> freqs(n);
  Eigen::MatrixXd modes(n, n);
  for (int k = 0; k < n; ++k) {
    const double w2 = solver.eigenvalues()[n - 1 - k];
    if (!(w2 > 0)) {
      throw StabilityError("transverse mode " + std::to_string(k) +
                               " has omega^2 <= 0 (zigzag instability: omega_z too large "
                               "for this ion count)",
                           k);
    }
    freqs[k] = std::sqrt(w2);
    modes.col(k) = solver.eigenvectors().col(n - 1 - k);
    // Fix the sign convention: largest-magnitude component positive.
    int imax = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(modes(i, k)) > std::abs(modes(imax, k))) imax = i;
    if (modes(imax, k) < 0) modes.col(k) = -modes.col(k);
  }
  return {freqs, modes};
}

std::vector<double> lamb_dicke(const TrapConfig& cfg, const std::vector<double>& mode_freqs) {
  std::vector<double> eta(mode_freqs.size());
  for (size_t k = 0; k < mode_freqs.size(); ++k) {
    if (!(mode_freqs[k] > 0)) throw std::invalid_argument("mode frequencies must be positive");
    eta[k] = cfg.k_vec * std::sqrt(kHbar / (2.0 * cfg.ion_mass * mode_freqs[k]));
  }
  return eta;
}

IonChain make_chain(const TrapConfig& cfg) {
  IonChain chain;
  chain.positions = equilibrium_positions(cfg);
  auto [freqs, modes] = transverse_modes(cfg, chain.positions);
  chain.mode_freqs = std::move(freqs);
  chain.mode_matrix = std::move(modes);
  chain.lamb_dicke = lamb_dicke(cfg, chain.mode_freqs);
  return chain;
}

}  // namespace ionsim

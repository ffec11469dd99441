#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ionsim/liouville.hpp"

using namespace ionsim;

namespace {

std::vector<ModeParams> sample_modes(int count, bool with_noise) {
  std::vector<ModeParams> modes;
  for (int k = 0; k < count; ++k) {
    ModeParams mp;
    mp.delta = 1.7e5 * (k + 1) + 3.1e4;
    mp.eta = 0.11 - 0.01 * k;
    mp.b_a = 0.71;
    mp.b_b = k % 2 ? -0.69 : 0.64;
    if (with_noise) {
      mp.gamma_up = 40.0 + 10.0 * k;
      mp.gamma_down = 55.0;
      mp.gamma_deph = 23.0;
    }
    modes.push_back(mp);
  }
  return modes;
}

std::vector<cplx> random_matrix(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(static_cast<size_t>(dim) * dim);
  for (auto& x : v) x = cplx(u(rng), u(rng));
  return v;
}

Eigen::MatrixXcd to_eigen(const std::vector<cplx>& flat, int dim) {
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = flat[static_cast<size_t>(r) * dim + c];
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("fused kernel matches the dense reference implementation") {
  struct Case {
    int nc;
    int modes;
    bool noise;
  };
  for (const Case& cs :
       {Case{5, 1, true}, Case{5, 1, false}, Case{4, 2, true}, Case{3, 3, true}}) {
    CAPTURE(cs.nc);
    CAPTURE(cs.modes);
    const Liouvillian lv(cs.nc, sample_modes(cs.modes, cs.noise), false);
    const int d = lv.dim();
    const std::vector<cplx> in = random_matrix(d, 11 + cs.modes);
    std::vector<cplx> out(in.size());
    for (double t : {0.0, 3.7e-6, 5.1e-5}) {
      const double omega = 2.9e5;
      lv.apply(t, omega, in.data(), out.data());
      const Eigen::MatrixXcd ref = reference_apply(lv, t, omega, to_eigen(in, d));
      const double scale = ref.cwiseAbs().maxCoeff();
      double max_err = 0.0;
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          max_err = std::max(
              max_err, std::abs(out[static_cast<size_t>(r) * d + c] - ref(r, c)));
        }
      }
      CHECK(max_err < 1e-12 * scale);
    }
  }
}

TEST_CASE("parallel kernel is bit-identical to serial") {
  // dim 256 is above the internal parallel threshold
  const auto modes = sample_modes(2, true);
  const Liouvillian serial(8, modes, false);
  const Liouvillian parallel(8, modes, true);
  const int d = serial.dim();
  REQUIRE(d == 256);
  const std::vector<cplx> in = random_matrix(d, 21);
  std::vector<cplx> out_s(in.size()), out_p(in.size());
  serial.apply(4.2e-6, 3.3e5, in.data(), out_s.data());
  parallel.apply(4.2e-6, 3.3e5, in.data(), out_p.data());
  size_t mismatches = 0;
  for (size_t i = 0; i < in.size(); ++i) {
    mismatches += (out_s[i] != out_p[i]) ? 1 : 0;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("rk4 reproduces exponential relaxation of a Fock state") {
  // zero pulse, pure relaxation: the n = 1 population decays as e^{-G t}
  ModeParams mp;
  mp.delta = 2.0e5;
  mp.eta = 0.1;
  mp.b_a = 0.7;
  mp.b_b = 0.7;
  mp.gamma_down = 1.8e4;
  const Liouvillian lv(4, {mp}, false);
  const int d = lv.dim();
  std::vector<cplx> rho(static_cast<size_t>(d) * d, 0.0);
  const int idx = 0 * 4 + 1;  // spin 00, n = 1
  rho[static_cast<size_t>(idx) * d + idx] = 1.0;
  RkWorkspace ws;
  const double t1 = 5e-5;
  rk4_evolve(lv, 0.0, 0.0, t1, 400, rho, ws);
  const double p1 = rho[static_cast<size_t>(idx) * d + idx].real();
  CHECK(p1 == doctest::Approx(std::exp(-mp.gamma_down * t1)).epsilon(1e-9));
  cplx tr = 0.0;
  for (int i = 0; i < d; ++i) tr += rho[static_cast<size_t>(i) * d + i];
  CHECK(std::abs(tr - 1.0) < 1e-12);
}

TEST_CASE("rk4 matches the matrix exponential for a constant Hamiltonian") {
  ModeParams mp;
  mp.delta = 0.0;  // time-independent H
  mp.eta = 0.12;
  mp.b_a = 0.8;
  mp.b_b = -0.55;
  const int nc = 6;
  const Liouvillian lv(nc, {mp}, false);
  const int d = lv.dim();
  const double omega = 2.4e5;

  Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd idm = Eigen::MatrixXcd::Identity(nc, nc);
  Eigen::MatrixXcd adag = Eigen::MatrixXcd::Zero(nc, nc);
  for (int n = 1; n < nc; ++n) adag(n, n - 1) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXcd spin =
      mp.b_a * kron(kron(sx, id2), idm) + mp.b_b * kron(kron(id2, sx), idm);
  const Eigen::MatrixXcd mode = kron(Eigen::MatrixXcd::Identity(4, 4), adag);
  const cplx z = 0.5 * cplx(0, 1) * omega * mp.eta;
  const Eigen::MatrixXcd h = (z * mode + std::conj(z) * mode.adjoint()) * spin;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const double t1 = 2e-5;
  Eigen::VectorXcd phases(d);
  for (int i = 0; i < d; ++i) phases[i] = std::exp(cplx(0, -eig.eigenvalues()[i] * t1));
  const Eigen::MatrixXcd u =
      eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(d, d);
  rho0(1 * nc + 0, 1 * nc + 0) = 1.0;
  const Eigen::MatrixXcd expected = u * rho0 * u.adjoint();

  std::vector<cplx> rho(static_cast<size_t>(d) * d, 0.0);
  rho[static_cast<size_t>(1 * nc + 0) * d + (1 * nc + 0)] = 1.0;
  RkWorkspace ws;
  rk4_evolve(lv, omega, 0.0, t1, 2000, rho, ws);
  double max_err = 0.0;
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      max_err = std::max(
          max_err, std::abs(rho[static_cast<size_t>(r) * d + c] - expected(r, c)));
  CHECK(max_err < 1e-10);
}

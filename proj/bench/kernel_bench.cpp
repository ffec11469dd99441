// Microbenchmark of the Lindblad RHS kernels: fused row-parallel apply
// (serial and OpenMP) against the dense reference implementation, plus one
// timed RK4 segment at the production dimensions.

#include <chrono>
#include <complex>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ionsim/liouville.hpp"

using ionsim::cplx;
using ionsim::Liouvillian;
using ionsim::ModeParams;

namespace {

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<cplx> random_state(int dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(static_cast<size_t>(dim) * dim);
  for (auto& x : v) x = cplx(u(rng), u(rng));
  return v;
}

std::vector<ModeParams> sample_modes(int count) {
  std::vector<ModeParams> modes;
  for (int k = 0; k < count; ++k) {
    ModeParams mp;
    mp.delta = 2.0e5 * (k + 1);
    mp.eta = 0.1;
    mp.b_a = 0.7;
    mp.b_b = k % 2 ? -0.7 : 0.7;
    mp.gamma_up = 50.0;
    mp.gamma_down = 50.0;
    mp.gamma_deph = 25.0;
    modes.push_back(mp);
  }
  return modes;
}

double bench_apply(const Liouvillian& lv, int reps) {
  const int d = lv.dim();
  const std::vector<cplx> in = random_state(d, 7);
  std::vector<cplx> out(in.size());
  lv.apply(1e-6, 3e5, in.data(), out.data());  // warm up
  const double t0 = now();
  for (int r = 0; r < reps; ++r) {
    lv.apply(1e-6 * r, 3e5, in.data(), out.data());
  }
  return (now() - t0) / reps;
}

void report(const char* label, int nc, int n_modes, int reps, int ref_reps) {
  const auto modes = sample_modes(n_modes);
  const Liouvillian serial(nc, modes, false);
  const Liouvillian parallel(nc, modes, true);
  const int d = serial.dim();

  const double t_serial = bench_apply(serial, reps);
  const double t_parallel = bench_apply(parallel, reps);

  double t_ref = 0.0;
  if (ref_reps > 0) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Random(d, d);
    (void)ionsim::reference_apply(serial, 1e-6, 3e5, rho);
    const double t0 = now();
    for (int r = 0; r < ref_reps; ++r) {
      (void)ionsim::reference_apply(serial, 1e-6 * r, 3e5, rho);
    }
    t_ref = (now() - t0) / ref_reps;
  }

  std::printf("%-22s dim=%4d  serial %10.3f us  omp %10.3f us  speedup %5.2fx",
              label, d, t_serial * 1e6, t_parallel * 1e6, t_serial / t_parallel);
  if (ref_reps > 0) {
    std::printf("  dense ref %10.3f us (%.0fx slower)", t_ref * 1e6, t_ref / t_serial);
  }
  std::printf("\n");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled\n");
#endif
  report("single mode, Nc=10", 10, 1, 2000, 20);
  report("two modes,  Nc=10", 10, 2, 50, 2);
  report("three modes, Nc=6", 6, 3, 10, 0);

  // One RK4 segment at the sequential-simulation dimension.
  {
    const Liouvillian lv(10, sample_modes(1), false);
    std::vector<cplx> state = random_state(lv.dim(), 3);
    ionsim::RkWorkspace ws;
    const int substeps = 256;
    const double t0 = now();
    ionsim::rk4_evolve(lv, 3e5, 0.0, 2e-5, substeps, state, ws);
    const double dt = now() - t0;
    std::printf("rk4 segment (%d substeps, dim %d): %.3f ms  (%.2f us/step)\n",
                substeps, lv.dim(), dt * 1e3, dt / substeps * 1e6);
  }
  return 0;
}

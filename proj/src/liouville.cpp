#include "ionsim/liouville.hpp"

#include <cmath>
#include <stdexcept>

#include "ionsim/segment_integrals.hpp"

namespace ionsim {

namespace {
constexpr cplx kI{0.0, 1.0};
constexpr int kParallelDimCutoff = 200;  // below this the row loop stays serial
}  // namespace

Liouvillian::Liouvillian(int fock_cutoff, std::vector<ModeParams> modes, bool parallel)
    : nc_(fock_cutoff), parallel_(parallel), modes_(std::move(modes)) {
  if (nc_ < 2) throw std::invalid_argument("fock cutoff must be at least 2");
  const int m = mode_count();
  if (m < 1 || m > 3) throw std::invalid_argument("1 to 3 modes supported");

  int fock_total = 1;
  stride_.assign(m, 1);
  for (int k = m - 1; k >= 0; --k) {
    stride_[k] = fock_total;
    fock_total *= nc_;
  }
  spin_stride_ = fock_total;
  dim_ = 4 * fock_total;

  sqrt_n_.assign(m, std::vector<double>(dim_));
  sqrt_np1_.assign(m, std::vector<double>(dim_));
  col_up_a_.assign(m, std::vector<int>(dim_));
  col_up_b_.assign(m, std::vector<int>(dim_));
  col_dn_a_.assign(m, std::vector<int>(dim_));
  col_dn_b_.assign(m, std::vector<int>(dim_));
  col_shift_up_.assign(m, std::vector<int>(dim_));
  col_shift_dn_.assign(m, std::vector<int>(dim_));
  flip_a_.resize(dim_);
  flip_b_.resize(dim_);

  for (int i = 0; i < dim_; ++i) {
    const int sigma = spin_of(i);
    flip_a_[i] = i + ((sigma ^ 2) - sigma) * spin_stride_;
    flip_b_[i] = i + ((sigma ^ 1) - sigma) * spin_stride_;
  }
  for (int k = 0; k < m; ++k) {
    for (int i = 0; i < dim_; ++i) {
      const int n = fock_of(i, k);
      const bool has_dn = n > 0;
      const bool has_up = n < nc_ - 1;
      sqrt_n_[k][i] = has_dn ? std::sqrt(static_cast<double>(n)) : 0.0;
      sqrt_np1_[k][i] = has_up ? std::sqrt(static_cast<double>(n + 1)) : 0.0;
      // Invalid shifts keep index i and rely on a zero factor.
      col_shift_up_[k][i] = has_up ? i + stride_[k] : i;
      col_shift_dn_[k][i] = has_dn ? i - stride_[k] : i;
      col_up_a_[k][i] = has_up ? flip_a_[i] + stride_[k] : i;
      col_up_b_[k][i] = has_up ? flip_b_[i] + stride_[k] : i;
      col_dn_a_[k][i] = has_dn ? flip_a_[i] - stride_[k] : i;
      col_dn_b_[k][i] = has_dn ? flip_b_[i] - stride_[k] : i;
    }
  }

  // decay(r, c) from the anticommutator halves plus dephasing, built with the
  // truncated ladder operators so the generator stays exactly trace preserving:
  // a a^dag = diag(n + 1) except 0 at the top level.
  decay_.assign(static_cast<size_t>(dim_) * dim_, 0.0);
  const auto up_weight = [this](int n) {
    return n < nc_ - 1 ? static_cast<double>(n + 1) : 0.0;
  };
  for (int r = 0; r < dim_; ++r) {
    for (int c = 0; c < dim_; ++c) {
      double d = 0.0;
      for (int k = 0; k < m; ++k) {
        const int nr = fock_of(r, k);
        const int nc = fock_of(c, k);
        d += 0.5 * modes_[k].gamma_up * (up_weight(nr) + up_weight(nc));
        d += 0.5 * modes_[k].gamma_down * (nr + nc);
        d += 0.5 * modes_[k].gamma_deph * (nr - nc) * (nr - nc);
      }
      decay_[static_cast<size_t>(r) * dim_ + c] = d;
    }
  }
}

double Liouvillian::max_abs_delta() const {
  double d = 0.0;
  for (const auto& mp : modes_) d = std::max(d, std::abs(mp.delta));
  return d;
}

void Liouvillian::apply(double t, double omega, const cplx* in, cplx* out) const {
  const int d = dim_;
  const int m = mode_count();
  // z_k = (i/2) Omega eta_k e^{+i delta_k t}, the coefficient of a^dag x S
  cplx z[3];
  for (int k = 0; k < m; ++k) {
    z[k] = 0.5 * kI * omega * modes_[k].eta * seg::cis(modes_[k].delta * t);
  }

  const bool par = parallel_ && d >= kParallelDimCutoff;
#pragma omp parallel for schedule(static) if (par)
  for (int r = 0; r < d; ++r) {
    cplx* out_row = out + static_cast<size_t>(r) * d;
    const cplx* in_row = in + static_cast<size_t>(r) * d;
    const double* decay_row = decay_.data() + static_cast<size_t>(r) * d;
    for (int c = 0; c < d; ++c) out_row[c] = -decay_row[c] * in_row[c];

    for (int k = 0; k < m; ++k) {
      const ModeParams& mp = modes_[k];
      const double wa = mp.b_a;
      const double wb = mp.b_b;
      const int s = stride_[k];

      // -i H rho: rows of (a^dag x S) rho and (a x S) rho
      if (sqrt_n_[k][r] != 0.0) {
        const cplx coef = -kI * z[k] * sqrt_n_[k][r];
        const cplx* src_a = in + static_cast<size_t>(flip_a_[r] - s) * d;
        const cplx* src_b = in + static_cast<size_t>(flip_b_[r] - s) * d;
        for (int c = 0; c < d; ++c) out_row[c] += coef * (wa * src_a[c] + wb * src_b[c]);
      }
      if (sqrt_np1_[k][r] != 0.0) {
        const cplx coef = -kI * std::conj(z[k]) * sqrt_np1_[k][r];
        const cplx* src_a = in + static_cast<size_t>(flip_a_[r] + s) * d;
        const cplx* src_b = in + static_cast<size_t>(flip_b_[r] + s) * d;
        for (int c = 0; c < d; ++c) out_row[c] += coef * (wa * src_a[c] + wb * src_b[c]);
      }

      // +i rho H: column gathers within this row
      {
        const cplx cu = kI * z[k];
        const cplx cd = kI * std::conj(z[k]);
        const double* fu = sqrt_np1_[k].data();
        const double* fd = sqrt_n_[k].data();
        const int* ua = col_up_a_[k].data();
        const int* ub = col_up_b_[k].data();
        const int* da = col_dn_a_[k].data();
        const int* db = col_dn_b_[k].data();
        for (int c = 0; c < d; ++c) {
          out_row[c] += cu * fu[c] * (wa * in_row[ua[c]] + wb * in_row[ub[c]]) +
                        cd * fd[c] * (wa * in_row[da[c]] + wb * in_row[db[c]]);
        }
      }

      // dissipator shift terms
      if (mp.gamma_up > 0.0 && sqrt_n_[k][r] != 0.0) {
        const double coef = mp.gamma_up * sqrt_n_[k][r];
        const cplx* src = in + static_cast<size_t>(r - s) * d;
        const double* f = sqrt_n_[k].data();
        const int* cols = col_shift_dn_[k].data();
        for (int c = 0; c < d; ++c) out_row[c] += coef * f[c] * src[cols[c]];
      }
      if (mp.gamma_down > 0.0 && sqrt_np1_[k][r] != 0.0) {
        const double coef = mp.gamma_down * sqrt_np1_[k][r];
        const cplx* src = in + static_cast<size_t>(r + s) * d;
        const double* f = sqrt_np1_[k].data();
        const int* cols = col_shift_up_[k].data();
        for (int c = 0; c < d; ++c) out_row[c] += coef * f[c] * src[cols[c]];
      }
      // mode dephasing is entirely elementwise,
      //   n rho n - {n^2, rho}/2 = -(n_r - n_c)^2 rho / 2,
      // and already folded into decay_.
    }
  }
}

double Liouvillian::top_level_population(const std::vector<cplx>& rho, int k) const {
  double pop = 0.0;
  for (int i = 0; i < dim_; ++i) {
    if (fock_of(i, k) == nc_ - 1) pop += std::real(rho[static_cast<size_t>(i) * dim_ + i]);
  }
  return pop;
}

void RkWorkspace::resize(size_t n) {
  k1.resize(n);
  k2.resize(n);
  k3.resize(n);
  k4.resize(n);
  stage.resize(n);
}

void rk4_evolve(const Liouvillian& lv, double omega, double t0, double t1, int substeps,
                std::vector<cplx>& state, RkWorkspace& ws) {
  const size_t n = state.size();
  ws.resize(n);
  const double h = (t1 - t0) / substeps;
  for (int step = 0; step < substeps; ++step) {
    const double t = t0 + step * h;
    lv.apply(t, omega, state.data(), ws.k1.data());
    for (size_t i = 0; i < n; ++i) ws.stage[i] = state[i] + 0.5 * h * ws.k1[i];
    lv.apply(t + 0.5 * h, omega, ws.stage.data(), ws.k2.data());
    for (size_t i = 0; i < n; ++i) ws.stage[i] = state[i] + 0.5 * h * ws.k2[i];
    lv.apply(t + 0.5 * h, omega, ws.stage.data(), ws.k3.data());
    for (size_t i = 0; i < n; ++i) ws.stage[i] = state[i] + h * ws.k3[i];
    lv.apply(t + h, omega, ws.stage.data(), ws.k4.data());
    for (size_t i = 0; i < n; ++i) {
      state[i] += (h / 6.0) * (ws.k1[i] + 2.0 * ws.k2[i] + 2.0 * ws.k3[i] + ws.k4[i]);
    }
  }
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd lower_op(int nc) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nc, nc);
  for (int n = 1; n < nc; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd dissipator(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd opd = op.adjoint();
  return op * rho * opd - 0.5 * (opd * op * rho + rho * opd * op);
}

}  // namespace

Eigen::MatrixXcd reference_apply(const Liouvillian& lv, double t, double omega,
                                 const Eigen::MatrixXcd& rho) {
  const int nc = lv.fock_cutoff();
  const int m = lv.mode_count();
  const Eigen::MatrixXcd spin_id = Eigen::MatrixXcd::Identity(4, 4);
  Eigen::MatrixXcd sx = Eigen::MatrixXcd::Zero(2, 2);
  sx(0, 1) = sx(1, 0) = 1.0;
  const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  const Eigen::MatrixXcd sxa = kron(sx, id2);
  const Eigen::MatrixXcd sxb = kron(id2, sx);
  const Eigen::MatrixXcd a1 = lower_op(nc);
  const Eigen::MatrixXcd idm = Eigen::MatrixXcd::Identity(nc, nc);

  auto mode_op = [&](int k, const Eigen::MatrixXcd& op) {
    Eigen::MatrixXcd full = spin_id;
    for (int j = 0; j < m; ++j) full = kron(full, j == k ? op : idm);
    return full;
  };

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(lv.dim(), lv.dim());
  for (int k = 0; k < m; ++k) {
    const ModeParams& mp = lv.modes()[k];
    const Eigen::MatrixXcd spin = mp.b_a * sxa + mp.b_b * sxb;
    Eigen::MatrixXcd spin_full = Eigen::MatrixXcd::Zero(lv.dim(), lv.dim());
    {
      Eigen::MatrixXcd full = spin;
      for (int j = 0; j < m; ++j) full = kron(full, idm);
      spin_full = full;
    }
    const Eigen::MatrixXcd adag = mode_op(k, a1.adjoint());
    const Eigen::MatrixXcd alow = mode_op(k, a1);
    const cplx z = 0.5 * kI * omega * mp.eta * seg::cis(mp.delta * t);
    h += (z * adag + std::conj(z) * alow) * spin_full;
  }

  Eigen::MatrixXcd out = -kI * (h * rho - rho * h);
  for (int k = 0; k < m; ++k) {
    const ModeParams& mp = lv.modes()[k];
    const Eigen::MatrixXcd adag = mode_op(k, a1.adjoint());
    const Eigen::MatrixXcd alow = mode_op(k, a1);
    const Eigen::MatrixXcd num = adag * alow;
    if (mp.gamma_up > 0) out += mp.gamma_up * dissipator(adag, rho);
    if (mp.gamma_down > 0) out += mp.gamma_down * dissipator(alow, rho);
    if (mp.gamma_deph > 0) out += mp.gamma_deph * dissipator(num, rho);
  }
  return out;
}

}  // namespace ionsim

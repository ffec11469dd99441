#pragma once

#include <complex>

namespace ionsim::seg {

using cplx = std::complex<double>;

// e^{ix} and e^{ix} - 1 (the latter without cancellation near x = 0).
cplx cis(double x);
cplx cis_m1(double x);

// integral_a^b e^{i delta t} dt, exact for delta = 0.
cplx exp_moment0(double delta, double a, double b);

// integral_a^b t e^{i delta t} dt, series fallback for small |delta (b-a)|.
cplx exp_moment1(double delta, double a, double b);

// integral_a^b dt1 integral_a^t1 dt2 sin(delta (t1 - t2))
double ordered_sin_diag(double delta, double a, double b);

// integral_a^b dt1 integral_a^t1 dt2 cos(delta (t1 - t2)) (t1 - t2)
double ordered_cos_dt_diag(double delta, double a, double b);

}  // namespace ionsim::seg

#include "ionsim/segment_integrals.hpp"

#include <cmath>

namespace ionsim::seg {

namespace {
constexpr double kSeriesCut = 0.5;  // |delta * dt| below which series are used
constexpr cplx kI{0.0, 1.0};
}  // namespace

cplx cis(double x) { return {std::cos(x), std::sin(x)}; }

cplx cis_m1(double x) {
  // cos(x) - 1 = -2 sin^2(x/2) avoids cancellation for small x.
  const double s = std::sin(0.5 * x);
  return {-2.0 * s * s, std::sin(x)};
}

cplx exp_moment0(double delta, double a, double b) {
  if (delta == 0.0) return {b - a, 0.0};
  return cis(delta * a) * cis_m1(delta * (b - a)) / (kI * delta);
}

cplx exp_moment1(double delta, double a, double b) {
  const double dt = b - a;
  const double x = delta * dt;
  // integral_0^dt u e^{i delta u} du = dt^2 * g1(x)
  cplx g1;
  if (std::abs(x) < kSeriesCut) {
    // g1(x) = -(1/x^2) sum_{n>=2} (n-1) (ix)^n / n!
    const cplx ix = kI * x;
    cplx term = ix * ix / 2.0;  // n = 2 contribution before the (n-1) weight
    cplx sum = term;            // (n-1) = 1
    for (int n = 3; n < 32; ++n) {
      term *= ix / static_cast<double>(n);
      const cplx contrib = term * static_cast<double>(n - 1);
      sum += contrib;
      if (std::abs(contrib) < 1e-20 * (1.0 + std::abs(sum))) break;
    }
    g1 = (x == 0.0) ? cplx{0.5, 0.0} : -sum / (x * x);
  } else {
    g1 = -(cis(x) * (kI * x - 1.0) + 1.0) / (x * x);
  }
  const cplx moment_local = a * exp_moment0(delta, 0.0, dt) + dt * dt * g1;
  return cis(delta * a) * moment_local;
}

double ordered_sin_diag(double delta, double a, double b) {
  const double dt = b - a;
  const double x = delta * dt;
  if (std::abs(x) < kSeriesCut) {
    // (x - sin x)/x^3 = sum_{m>=1} (-)^{m+1} x^{2m-2} / (2m+1)!
    double term = 1.0 / 6.0;
    double sum = term;
    const double x2 = x * x;
    for (int m = 2; m < 20; ++m) {
      term *= -x2 / static_cast<double>((2 * m) * (2 * m + 1));
      sum += term;
      if (std::abs(term) < 1e-20) break;
    }
    return delta * dt * dt * dt * sum;
  }
  return (x - std::sin(x)) / (delta * delta);
}

double ordered_cos_dt_diag(double delta, double a, double b) {
  const double dt = b - a;
  const double x = delta * dt;
  const double dt3 = dt * dt * dt;
  if (std::abs(x) < kSeriesCut) {
    // [2 sin(x)/x - 1 - cos(x)] / x^2 = sum_{m>=1} (-)^m (1-2m) x^{2m-2} / (2m+1)!
    double num = 1.0;  // running (-)^m x^{2m-2}, m = 1
    double sum = 1.0 / 6.0;
    const double x2 = x * x;
    double fact = 6.0;  // (2m+1)! at m = 1
    for (int m = 2; m < 20; ++m) {
      num *= -x2;
      fact *= static_cast<double>(2 * m) * static_cast<double>(2 * m + 1);
      const double term = num * static_cast<double>(1 - 2 * m) / fact;
      sum += term;
      if (std::abs(term) < 1e-20) break;
    }
    return dt3 * sum;
  }
  return dt3 * (2.0 * std::sin(x) / x - 1.0 - std::cos(x)) / (x * x);
}

}  // namespace ionsim::seg

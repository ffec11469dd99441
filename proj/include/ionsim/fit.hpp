#pragma once

#include <vector>

namespace ionsim {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  // max_i |y_i - fit(x_i)| / |fit(x_i)|
  double max_relative_residual = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
};

// Least squares of log y = log k + p log x; all inputs must be positive.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation (average ranks on ties).
double spearman_rank_correlation(const std::vector<double>& a,
                                 const std::vector<double>& b);

}  // namespace ionsim

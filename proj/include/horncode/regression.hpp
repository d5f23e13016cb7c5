#pragma once

#include <span>

namespace horncode {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root-mean-square of the fit residuals
};

// Ordinary least squares y = slope * x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Fit of log(y) against log(x); all inputs must be positive.
LineFit fit_power_law(std::span<const double> x, std::span<const double> y);

}  // namespace horncode

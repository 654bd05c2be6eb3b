#pragma once

#include <functional>
#include <vector>

namespace driftfit {

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
};

// Adaptive Gauss-Kronrod (G7/K15) integration on [a,b].
// Bisects the interval with the largest error estimate until the summed
// estimate drops below abs_tol or the segment budget is exhausted.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_segments = 5000);

// Same, but with the integrand pre-split at interior breakpoints (sorted or
// not; values outside (a,b) are ignored). Useful for piecewise-smooth
// integrands such as truncation kernels.
QuadResult integrate_segments(const std::function<double(double)>& f, double a, double b,
                              const std::vector<double>& interior_breaks, double abs_tol,
                              int max_segments = 5000);

}  // namespace driftfit

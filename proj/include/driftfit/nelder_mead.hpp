#pragma once

#include <array>
#include <functional>

namespace driftfit {

using Point2 = std::array<double, 2>;

struct NmOptions {
  int max_evals = 2000;
  double diam_tol = 1e-8;  // per-coordinate simplex diameter
  double init_step = 0.1;  // relative initial simplex edge
};

struct NmResult {
  Point2 x{0.0, 0.0};
  double f = 0.0;
  int evals = 0;
  bool converged = false;
};

// Nelder-Mead on a box: candidate points are clamped into [lo, hi] before
// evaluation and the reported minimizer always lies inside the box.
NmResult nelder_mead_box(const std::function<double(Point2)>& f, Point2 start,
                         Point2 lo, Point2 hi, const NmOptions& options = {});

}  // namespace driftfit

#include "driftfit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftfit {
namespace {

Point2 clamp_box(Point2 p, Point2 lo, Point2 hi) {
  return {std::clamp(p[0], lo[0], hi[0]), std::clamp(p[1], lo[1], hi[1])};
}

struct Simplex {
  std::array<Point2, 3> x;
  std::array<double, 3> f;

  void sort() {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2 - i; ++j)
        if (f[j + 1] < f[j]) {
          std::swap(f[j], f[j + 1]);
          std::swap(x[j], x[j + 1]);
        }
  }

  double diameter(int coord) const {
    double lo = x[0][coord], hi = x[0][coord];
    for (int i = 1; i < 3; ++i) {
      lo = std::min(lo, x[i][coord]);
      hi = std::max(hi, x[i][coord]);
    }
    return hi - lo;
  }
};

NmResult run_simplex(const std::function<double(Point2)>& fn, Simplex s, Point2 lo,
                     Point2 hi, const NmOptions& options, int& evals) {
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  auto eval = [&](Point2 p) {
    ++evals;
    return fn(clamp_box(p, lo, hi));
  };

  NmResult result;
  while (evals < options.max_evals) {
    s.sort();
    if (s.diameter(0) < options.diam_tol && s.diameter(1) < options.diam_tol) {
      result.converged = true;
      break;
    }
    const Point2 centroid{0.5 * (s.x[0][0] + s.x[1][0]), 0.5 * (s.x[0][1] + s.x[1][1])};
    auto along = [&](double t) {
      return Point2{centroid[0] + t * (centroid[0] - s.x[2][0]),
                    centroid[1] + t * (centroid[1] - s.x[2][1])};
    };

    const Point2 xr = along(kReflect);
    const double fr = eval(xr);
    if (fr < s.f[0]) {
      const Point2 xe = along(kExpand);
      const double fe = eval(xe);
      if (fe < fr) {
        s.x[2] = xe;
        s.f[2] = fe;
      } else {
        s.x[2] = xr;
        s.f[2] = fr;
      }
    } else if (fr < s.f[1]) {
      s.x[2] = xr;
      s.f[2] = fr;
    } else {
      const bool outside = fr < s.f[2];
      const Point2 xc = along(outside ? kContract : -kContract);
      const double fc = eval(xc);
      if (fc < (outside ? fr : s.f[2])) {
        s.x[2] = xc;
        s.f[2] = fc;
      } else {
        for (int i = 1; i < 3; ++i) {
          s.x[i] = {s.x[0][0] + kShrink * (s.x[i][0] - s.x[0][0]),
                    s.x[0][1] + kShrink * (s.x[i][1] - s.x[0][1])};
          s.f[i] = eval(s.x[i]);
        }
      }
    }
  }
  s.sort();
  result.x = clamp_box(s.x[0], lo, hi);
  result.f = s.f[0];
  result.evals = evals;
  return result;
}

Simplex initial_simplex(const std::function<double(Point2)>& fn, Point2 start,
                        Point2 lo, Point2 hi, double rel_step, int& evals) {
  Simplex s;
  s.x[0] = clamp_box(start, lo, hi);
  for (int coord = 0; coord < 2; ++coord) {
    Point2 p = s.x[0];
    double step = rel_step * std::max(1.0, std::abs(p[coord]));
    if (p[coord] + step > hi[coord]) step = -step;  // step inward at the edge
    p[coord] = std::clamp(p[coord] + step, lo[coord], hi[coord]);
    s.x[coord + 1] = p;
  }
  for (int i = 0; i < 3; ++i) {
    ++evals;
    s.f[i] = fn(s.x[i]);
  }
  return s;
}

}  // namespace

NmResult nelder_mead_box(const std::function<double(Point2)>& fn, Point2 start,
                         Point2 lo, Point2 hi, const NmOptions& options) {
  if (lo[0] > hi[0] || lo[1] > hi[1])
    throw std::invalid_argument("nelder_mead_box: empty box");
  int evals = 0;
  Simplex s = initial_simplex(fn, start, lo, hi, options.init_step, evals);
  NmResult first = run_simplex(fn, s, lo, hi, options, evals);

  // One restart from a perturbed simplex around the incumbent.
  Simplex s2 = initial_simplex(fn, first.x, lo, hi, 0.05 * options.init_step, evals);
  NmResult second = run_simplex(fn, s2, lo, hi, options, evals);

  NmResult best = (second.f <= first.f) ? second : first;
  best.evals = evals;
  best.converged = first.converged && second.converged;
  return best;
}

}  // namespace driftfit

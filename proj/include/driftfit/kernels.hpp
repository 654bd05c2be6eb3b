#pragma once

#include <vector>

namespace driftfit {

// Truncation functions phi for the jump filter.
//   Identity     phi == 1 (no truncation)
//   Phi0         smooth plateau: 1 on [-1,1], 0 outside [-2,2]
//   Oscillating  Nikolskii combination phi^(l)_d with vanishing moments
struct TruncationKernel {
  enum class Kind { Identity, Phi0, Oscillating };

  Kind kind = Kind::Phi0;
  int l = 0;
  double d = 0.0;

  static TruncationKernel identity();
  static TruncationKernel phi0();
  static TruncationKernel oscillating(int l, double d);

  double operator()(double x) const;

  // Smallest S with phi == 0 outside [-S, S]; +inf for Identity.
  double support_bound() const;

  // Number of leading vanishing moments (k = 0..order-1 all integrate to 0).
  // Oscillating(l): l moments, plus k = l when l is odd.
  int vanishing_order() const;

  // Positive abscissae where the piecewise definition changes; quadrature
  // splits panels here.
  std::vector<double> breakpoints() const;
};

// Smooth indicator: 1 on [-1,1], 0 outside [-2,2], g-ratio transition with
// g(u) = exp(-1/u).
double eval_phi0(double x);

// phi^(l)_d(x) = c_d^{-1} sum_{k=1}^{l} C(l,k) (-1)^{k+1} (1/k) phi1_d(x/k),
// phi1_d(x) = (q*phi0(x) - phi0(x/q)) / (q-1) with q = d/2, so that phi1_d is
// 1 on [-1,1] and vanishes outside [-d, d]. Requires d > 2.
double eval_oscillating(double x, int l, double d);

// c_d = sum_{k=1}^{l} C(l,k) (-1)^{k+1} / k  (= l-th harmonic number; does not
// depend on d).
double osc_normalizer(int l);

// int x^k phi(x) dx over the support, adaptive quadrature.
double kernel_moment(const TruncationKernel& kernel, int k, double abs_tol = 1e-10);

// phi(y / threshold).
double eval_scaled(const TruncationKernel& kernel, double y, double threshold);

}  // namespace driftfit

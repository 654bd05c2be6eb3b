#include "driftfit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "driftfit/quadrature.hpp"

namespace driftfit {
namespace {

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double eval_phi1(double x, double d) {
  return (d * eval_phi0(x) - eval_phi0(x / d)) / (d - 1.0);
}

}  // namespace

double eval_phi0(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  const double up = bump(2.0 - ax);
  const double dn = bump(ax - 1.0);
  return up / (up + dn);
}

double osc_normalizer(int l) {
  double c = 0.0;
  for (int k = 1; k <= l; ++k) c += binom(l, k) * ((k % 2) ? 1.0 : -1.0) / k;
  return c;
}

double eval_oscillating(double x, int l, double d) {
  if (l < 1) throw std::invalid_argument("eval_oscillating: l must be >= 1");
  if (d <= 2.0) throw std::invalid_argument("eval_oscillating: d must be > 2");
  // d parametrizes the support of the building block: phi1 vanishes outside
  // [-d, d], which puts the internal dilation at d/2 since phi0 reaches 2.
  const double dilation = 0.5 * d;
  double s = 0.0;
  for (int k = 1; k <= l; ++k)
    s += binom(l, k) * ((k % 2) ? 1.0 : -1.0) * eval_phi1(x / k, dilation) / k;
  return s / osc_normalizer(l);
}

TruncationKernel TruncationKernel::identity() {
  TruncationKernel k;
  k.kind = Kind::Identity;
  return k;
}

TruncationKernel TruncationKernel::phi0() {
  TruncationKernel k;
  k.kind = Kind::Phi0;
  return k;
}

TruncationKernel TruncationKernel::oscillating(int l, double d) {
  if (l < 1) throw std::invalid_argument("TruncationKernel: l must be >= 1");
  if (d <= 2.0) throw std::invalid_argument("TruncationKernel: d must be > 2");
  TruncationKernel k;
  k.kind = Kind::Oscillating;
  k.l = l;
  k.d = d;
  return k;
}

double TruncationKernel::operator()(double x) const {
  switch (kind) {
    case Kind::Identity: return 1.0;
    case Kind::Phi0: return eval_phi0(x);
    case Kind::Oscillating: return eval_oscillating(x, l, d);
  }
  return 0.0;
}

double TruncationKernel::support_bound() const {
  switch (kind) {
    case Kind::Identity: return std::numeric_limits<double>::infinity();
    case Kind::Phi0: return 2.0;
    // The outermost term carries phi1(x/l) with phi1 supported on [-d, d].
    case Kind::Oscillating: return static_cast<double>(l) * d;
  }
  return 0.0;
}

int TruncationKernel::vanishing_order() const {
  switch (kind) {
    case Kind::Identity: return 0;
    case Kind::Phi0: return 0;
    case Kind::Oscillating: return l;
  }
  return 0;
}

std::vector<double> TruncationKernel::breakpoints() const {
  std::vector<double> pts;
  switch (kind) {
    case Kind::Identity: return pts;
    case Kind::Phi0: pts = {1.0, 2.0}; break;
    case Kind::Oscillating:
      for (int k = 1; k <= l; ++k) {
        pts.push_back(k);
        pts.push_back(2.0 * k);
        pts.push_back(k * 0.5 * d);
        pts.push_back(k * d);
      }
      break;
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double kernel_moment(const TruncationKernel& kernel, int k, double abs_tol) {
  if (k < 0) throw std::invalid_argument("kernel_moment: k must be >= 0");
  if (kernel.kind == TruncationKernel::Kind::Identity)
    throw std::invalid_argument("kernel_moment: identity kernel has no finite moments");
  const double s = kernel.support_bound();
  std::vector<double> breaks = kernel.breakpoints();
  std::vector<double> all;
  for (double b : breaks) {
    all.push_back(b);
    all.push_back(-b);
  }
  all.push_back(0.0);
  auto f = [&kernel, k](double x) { return std::pow(x, k) * kernel(x); };
  QuadResult q = integrate_segments(f, -s, s, all, abs_tol);
  if (q.abs_error_estimate > std::max(abs_tol, 1e-9))
    throw std::runtime_error("kernel_moment: quadrature did not converge");
  return q.value;
}

double eval_scaled(const TruncationKernel& kernel, double y, double threshold) {
  if (threshold <= 0.0) throw std::invalid_argument("eval_scaled: threshold must be > 0");
  return kernel(y / threshold);
}

}  // namespace driftfit

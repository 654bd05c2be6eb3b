#include "driftfit/levy_integrals.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace driftfit {
namespace {

constexpr double kTailCutoff = 50.0;  // e^{-50} ~ 2e-22, below every tolerance

void require_alpha(double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("alpha must be in (0,1)");
}

}  // namespace

QuadResult gamma_tail(double alpha) {
  require_alpha(alpha);
  const double p = 1.0 / (1.0 - alpha);
  // (0,1]: z = u^{1/(1-alpha)} turns e^{-z} z^{-alpha} dz into a smooth
  // integrand / (1-alpha).
  QuadResult head = integrate(
      [p](double u) { return std::exp(-std::pow(u, p)); }, 0.0, 1.0, 1e-12);
  QuadResult tail = integrate(
      [alpha](double z) { return std::exp(-z) * std::pow(z, -alpha); }, 1.0,
      kTailCutoff, 1e-12);
  return {head.value * p + tail.value,
          head.abs_error_estimate * p + tail.abs_error_estimate};
}

QuadResult kernel_fractional_moment(const TruncationKernel& kernel, double alpha) {
  require_alpha(alpha);
  const double p = 1.0 / (1.0 - alpha);
  QuadResult head = integrate(
      [&kernel, p](double u) { return kernel(std::pow(u, p)); }, 0.0, 1.0, 1e-10);
  QuadResult result{head.value * p, head.abs_error_estimate * p};
  const double s = kernel.support_bound();
  if (s > 1.0) {
    QuadResult tail = integrate_segments(
        [&kernel, alpha](double v) { return kernel(v) * std::pow(v, -alpha); },
        1.0, s, kernel.breakpoints(), 1e-10);
    result.value += tail.value;
    result.abs_error_estimate += tail.abs_error_estimate;
  }
  if (result.abs_error_estimate > 1e-8)
    throw std::runtime_error("kernel_fractional_moment: quadrature did not converge");
  return result;
}

double trunc_compensator(double gamma_x, double delta, double beta, double c,
                         const TruncationKernel& kernel, const LevyMeasure& levy) {
  if (delta <= 0.0) throw std::invalid_argument("trunc_compensator: delta must be > 0");
  if (levy.kind == LevyMeasure::Kind::None)
    throw std::invalid_argument("trunc_compensator: levy measure is None");
  if (gamma_x == 0.0) return 0.0;
  const double thr = c * std::pow(delta, beta);
  auto one_minus_phi = [&](double z) {
    return 1.0 - eval_scaled(kernel, gamma_x * z, thr);
  };
  // phi == 1 wherever |gamma_x z| <= thr, phi == 0 beyond support*thr.
  std::vector<double> breaks;
  const double s = kernel.support_bound();
  for (double b : kernel.breakpoints()) {
    breaks.push_back(b * thr / std::abs(gamma_x));
    breaks.push_back(-b * thr / std::abs(gamma_x));
  }
  breaks.push_back(thr / std::abs(gamma_x));
  breaks.push_back(-thr / std::abs(gamma_x));

  if (levy.kind == LevyMeasure::Kind::GaussianCP) {
    const double mu = levy.mu_j, sd = levy.sigma_j, lam = levy.lambda;
    if (lam == 0.0) return 0.0;
    auto f = [&](double z) {
      const double u = (z - mu) / sd;
      const double dens = lam * std::exp(-0.5 * u * u) / (sd * 2.5066282746310005);
      return z * gamma_x * one_minus_phi(z) * dens;
    };
    const double lo = mu - 10.0 * sd, hi = mu + 10.0 * sd;
    return integrate_segments(f, lo, hi, breaks, 1e-11).value;
  }

  // Tempered stable on (0,inf): the plateau zeroes the integrand on
  // (0, thr/|gamma_x|], so there is no singular endpoint left.
  if (!std::isfinite(s)) return 0.0;  // identity kernel: 1 - phi == 0 everywhere
  const double alpha = levy.alpha;
  auto f = [&](double z) {
    return gamma_x * one_minus_phi(z) * std::exp(-z) * std::pow(z, -alpha);
  };
  const double lo = thr / std::abs(gamma_x);
  const double hi = kTailCutoff;
  if (lo >= hi) return 0.0;
  return integrate_segments(f, lo, hi, breaks, 1e-11).value;
}

QuadResult ts_tail_intensity(double alpha, double eps) {
  require_alpha(alpha);
  if (eps <= 0.0) throw std::invalid_argument("ts_tail_intensity: eps must be > 0");
  if (eps >= kTailCutoff) return {0.0, 0.0};
  // Split off the exactly-integrable Pareto part to keep panels shallow for
  // very small eps: e^{-z} z^{-1-a} = z^{-1-a} + (e^{-z}-1) z^{-1-a}.
  double pareto_head = 0.0;
  double lo = eps;
  if (eps < 1.0) {
    pareto_head = (std::pow(eps, -alpha) - 1.0) / alpha;
    QuadResult rest = integrate(
        [alpha](double z) { return std::expm1(-z) * std::pow(z, -1.0 - alpha); },
        eps, 1.0, 1e-12);
    pareto_head += rest.value;
    lo = 1.0;
  }
  QuadResult tail = integrate(
      [alpha](double z) { return std::exp(-z) * std::pow(z, -1.0 - alpha); }, lo,
      kTailCutoff, 1e-12);
  return {pareto_head + tail.value, tail.abs_error_estimate + 1e-12};
}

QuadResult ts_small_jump_mean(double alpha, double eps) {
  require_alpha(alpha);
  if (eps <= 0.0) return {0.0, 0.0};
  const double hi = std::min(eps, kTailCutoff);
  const double p = 1.0 / (1.0 - alpha);
  // z = eps * u^{1/(1-alpha)} keeps the z^{-alpha} endpoint regular.
  const double scale = std::pow(hi, 1.0 - alpha);
  QuadResult q = integrate(
      [p, hi](double u) { return std::exp(-hi * std::pow(u, p)); }, 0.0, 1.0, 1e-13);
  return {q.value * p * scale, q.abs_error_estimate * p * scale};
}

}  // namespace driftfit

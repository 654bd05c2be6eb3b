#pragma once

#include <array>
#include <cstdint>

#include "driftfit/kernels.hpp"
#include "driftfit/model.hpp"

namespace driftfit {

// Approximations m~_{theta,dt}(x) of the filtered conditional moment
//   m = E[X_dt phi | X_0 = x] / E[phi | X_0 = x].
struct MomentApprox {
  enum class Kind { Euler, KesslerOuExact, KesslerGeneric, StableCorrected, McOracle };

  Kind kind = Kind::Euler;
  int order = 3;                       // KesslerGeneric: number of generator iterates
  double beta = 0.49;                  // StableCorrected / McOracle threshold exponent
  double c = 1.0;                      // threshold scale
  TruncationKernel kernel = TruncationKernel::phi0();
  double precomputed_j = -1.0;         // kernel_fractional_moment; < 0 means unset
  long mc_paths = 100000;              // McOracle
  std::uint64_t mc_seed = 1;
  int mc_workers = 0;

  static MomentApprox euler();
  static MomentApprox kessler_ou_exact();
  static MomentApprox kessler_generic(int order);
  static MomentApprox stable_corrected(double beta, double c, TruncationKernel kernel);
  static MomentApprox mc_oracle(double beta, double c, TruncationKernel kernel,
                                long paths, std::uint64_t seed, int workers = 0);

  double value(const ModelSpec& model, Theta theta, double x, double dt) const;
  std::array<double, 2> theta_grad(const ModelSpec& model, Theta theta, double x,
                                   double dt) const;

  // Fills precomputed_j for StableCorrected so hot loops skip the quadrature.
  void prepare(const ModelSpec& model);
};

// x + dt * b_bar(theta, x).
double m_euler(const ModelSpec& model, Theta theta, double x, double dt);

// Exact mean of the jump-stripped affine flow:
// (x + th2/th1 - w/th1) e^{th1 dt} + (w - th2)/th1 with w = gamma*lambda*mu_j.
// th1 == 0 is rejected.
double m_kessler_ou_exact(Theta theta, double x, double dt, double jump_mean_drift);

// x + sum_{k=1}^{K} A^{(k)}(x) dt^k / k! with A^{(k)} = Abar_c^k(g), g(y)=y-x,
// Abar_c(f) = b_bar f' + a^2 f''/2, iterated on Taylor jets.
double m_kessler_generic(const ModelSpec& model, Theta theta, double x, double dt,
                         int order);

// x + dt*b_bar + dt^{1+beta(1-alpha)} c^{1-alpha} gamma(x)^alpha * J,
// J = int_0^inf phi(v) v^{-alpha} dv. Tempered-stable models only.
// Pass precomputed_j >= 0 to skip the quadrature.
double m_stable_corrected(const ModelSpec& model, Theta theta, double x, double dt,
                          double beta, double c, const TruncationKernel& kernel,
                          double precomputed_j = -1.0);

struct McOracleResult {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Ratio estimator sum(X phi) / sum(phi) over paths started at x, with the
// delta-method standard error. Deterministic in (seed, paths) regardless of
// worker count.
McOracleResult m_mc_oracle(const ModelSpec& model, Theta theta, double x, double dt,
                           double beta, double c, const TruncationKernel& kernel,
                           long n_paths, std::uint64_t seed, int workers = 0);

// Analytic d m~/d theta for every variant except McOracle.
std::array<double, 2> m_theta_grad(const MomentApprox& approx, const ModelSpec& model,
                                   Theta theta, double x, double dt);

}  // namespace driftfit

#pragma once

#include <array>

#include "driftfit/kernels.hpp"
#include "driftfit/model.hpp"
#include "driftfit/moment_approx.hpp"
#include "driftfit/sample_path.hpp"

namespace driftfit {

struct ContrastConfig {
  double beta = 0.49;  // threshold exponent, in (0, 1/2)
  double c = 1.0;      // threshold scale
  TruncationKernel kernel = TruncationKernel::phi0();
  double k_ind = 2.0;  // indicator keeps |X_{t_i}| <= dt^{-k_ind}
  bool weight_by_variance = false;  // 1/(a^2(X_{t_i}) dt_i) weights

  void validate() const;
};

struct ThetaBox {
  std::array<double, 2> th1{-5.0, -0.01};
  std::array<double, 2> th2{-10.0, 10.0};
};

struct EstimateResult {
  Theta theta;
  double contrast_at_opt = 0.0;
  double kept_fraction = 0.0;  // increments with nonzero kernel weight
  int iterations = 0;          // contrast evaluations spent
  bool converged = false;
};

// U_n(theta) = sum_i w_i (X_{t_{i+1}} - m~(X_{t_i}))^2 phi_i 1{|X_{t_i}| <= dt_i^{-k}}.
double contrast_value(const SamplePath& path, Theta theta, const ModelSpec& model,
                      const MomentApprox& approx, const ContrastConfig& cfg);

// Nelder-Mead over the box, warm-started from the closed-form weighted
// least-squares fit of the Euler residuals.
EstimateResult minimize_contrast(const SamplePath& path, const ModelSpec& model,
                                 const MomentApprox& approx, const ContrastConfig& cfg,
                                 const ThetaBox& box = {});

struct Theta2StableResult {
  double theta2 = 0.0;        // corrected estimator
  double theta2_euler = 0.0;  // uncorrected Euler-level estimator
  double kept_fraction = 0.0;
};

// Explicit theta2 estimator for the tempered-stable model with theta1 frozen.
// theta2_euler subtracts gamma*Gamma(1-alpha) only; theta2 additionally
// subtracts dt^{beta(1-alpha)} c^{1-alpha} gamma^alpha J.
Theta2StableResult estimate_theta2_stable(const SamplePath& path, double theta1_fixed,
                                          const ModelSpec& model,
                                          const ContrastConfig& cfg);

struct StepConditionDiag {
  double value = 0.0;  // sqrt(n) * dt^{order - 1/2}
  bool warn = false;
};

// Diagnostic for the expansion-order step condition.
StepConditionDiag check_step_condition(long n, double dt, int order);

}  // namespace driftfit

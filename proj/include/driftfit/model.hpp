#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace driftfit {

struct Theta {
  double th1 = 0.0;
  double th2 = 0.0;
};

// Levy measure F(z)dz of the driving jump noise.
//   None            F = 0
//   GaussianCP      F(z) = lambda * N(mu_j, sigma_j^2) density   (finite activity)
//   TemperedStable  F(z) = e^{-z} z^{-1-alpha} on (0,inf), alpha in (0,1), unit tilt
struct LevyMeasure {
  enum class Kind { None, GaussianCP, TemperedStable };

  Kind kind = Kind::None;
  double lambda = 0.0;
  double mu_j = 0.0;
  double sigma_j = 1.0;
  double alpha = 0.5;

  static LevyMeasure none() { return {}; }

  static LevyMeasure gaussian_cp(double lambda, double mu_j, double sigma_j) {
    if (lambda < 0.0) throw std::invalid_argument("gaussian_cp: lambda must be >= 0");
    if (sigma_j <= 0.0) throw std::invalid_argument("gaussian_cp: sigma_j must be > 0");
    LevyMeasure m;
    m.kind = Kind::GaussianCP;
    m.lambda = lambda;
    m.mu_j = mu_j;
    m.sigma_j = sigma_j;
    return m;
  }

  static LevyMeasure tempered_stable(double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0)
      throw std::invalid_argument("tempered_stable: alpha must be in (0,1)");
    LevyMeasure m;
    m.kind = Kind::TemperedStable;
    m.alpha = alpha;
    return m;
  }

  // int z F(z) dz: the per-unit-time mean removed by compensation.
  double mean_jump_rate() const {
    switch (kind) {
      case Kind::None: return 0.0;
      case Kind::GaussianCP: return lambda * mu_j;
      case Kind::TemperedStable: return std::tgamma(1.0 - alpha);
    }
    return 0.0;
  }
};

// Coefficient functions of dX = b(theta,X)dt + a(X)dW + gamma(X-) z dmu~.
// Jet providers return Taylor coefficients (f(x), f'(x), f''(x)/2!, ...) up to
// the requested order; they are optional and only needed by the generic
// Kessler expansion.
struct ModelSpec {
  std::function<double(Theta, double)> drift;
  std::function<std::array<double, 2>(Theta, double)> drift_theta_grad;
  std::function<double(double)> diffusion;
  std::function<double(double)> jump_coeff;
  LevyMeasure levy;

  std::function<std::vector<double>(Theta, double, int)> drift_jet;
  std::function<std::array<std::vector<double>, 2>(Theta, double, int)> drift_theta_grad_jet;
  std::function<std::vector<double>(double, int)> diffusion_jet;
  std::function<std::vector<double>(double, int)> jump_coeff_jet;

  // Set for the built-in affine model b = th1*x + th2, a = sigma, gamma const.
  bool affine = false;
  double sigma_const = 0.0;
  double gamma_const = 0.0;
};

// b_bar = b - gamma(x) * int z F(z) dz (valid for summable jumps).
inline double drift_compensated(const ModelSpec& model, Theta th, double x) {
  const double rate = model.levy.mean_jump_rate();
  if (rate == 0.0) return model.drift(th, x);
  return model.drift(th, x) - model.jump_coeff(x) * rate;
}

// Affine model of the numerical sections: b(theta,x) = th1*x + th2,
// constant diffusion sigma > 0, constant jump coefficient gamma.
inline ModelSpec make_affine_model(double sigma, double gamma, LevyMeasure levy) {
  if (sigma < 0.0) throw std::invalid_argument("make_affine_model: sigma must be >= 0");
  ModelSpec m;
  m.drift = [](Theta th, double x) { return th.th1 * x + th.th2; };
  m.drift_theta_grad = [](Theta, double x) { return std::array<double, 2>{x, 1.0}; };
  m.diffusion = [sigma](double) { return sigma; };
  m.jump_coeff = [gamma](double) { return gamma; };
  m.levy = levy;
  m.drift_jet = [](Theta th, double x, int order) {
    std::vector<double> jet(static_cast<std::size_t>(order) + 1, 0.0);
    jet[0] = th.th1 * x + th.th2;
    if (order >= 1) jet[1] = th.th1;
    return jet;
  };
  m.drift_theta_grad_jet = [](Theta, double x, int order) {
    std::vector<double> d1(static_cast<std::size_t>(order) + 1, 0.0);
    std::vector<double> d2(static_cast<std::size_t>(order) + 1, 0.0);
    d1[0] = x;
    if (order >= 1) d1[1] = 1.0;
    d2[0] = 1.0;
    return std::array<std::vector<double>, 2>{d1, d2};
  };
  m.diffusion_jet = [sigma](double, int order) {
    std::vector<double> jet(static_cast<std::size_t>(order) + 1, 0.0);
    jet[0] = sigma;
    return jet;
  };
  m.jump_coeff_jet = [gamma](double, int order) {
    std::vector<double> jet(static_cast<std::size_t>(order) + 1, 0.0);
    jet[0] = gamma;
    return jet;
  };
  m.affine = true;
  m.sigma_const = sigma;
  m.gamma_const = gamma;
  return m;
}

}  // namespace driftfit

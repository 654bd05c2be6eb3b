#include "driftfit/contrast.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "driftfit/levy_integrals.hpp"
#include "driftfit/nelder_mead.hpp"

namespace driftfit {
namespace {

// Increment data with filter weights resolved once; the kernel, indicator and
// variance weights do not depend on theta, so minimization loops reuse them.
struct PreparedContrast {
  std::vector<double> x0, x1, dt, weight;
  std::vector<double> stable_corr;  // theta-free correction per increment
  double kept_fraction = 0.0;
  bool uniform_dt = true;

  void build(const SamplePath& path, const ModelSpec& model, const MomentApprox& approx,
             const ContrastConfig& cfg) {
    path.validate();
    const std::size_t n = path.size() - 1;
    if (n < 1) throw std::invalid_argument("contrast: need at least 2 observations");
    x0.reserve(n);
    x1.reserve(n);
    dt.reserve(n);
    weight.reserve(n);
    long kept = 0;
    double first_dt = path.times[1] - path.times[0];
    const bool is_stable = approx.kind == MomentApprox::Kind::StableCorrected;
    double j_value = -1.0;
    if (is_stable) {
      if (model.levy.kind != LevyMeasure::Kind::TemperedStable)
        throw std::invalid_argument("contrast: StableCorrected requires tempered-stable jumps");
      j_value = approx.precomputed_j >= 0.0
                    ? approx.precomputed_j
                    : kernel_fractional_moment(approx.kernel, model.levy.alpha).value;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double h = path.times[i + 1] - path.times[i];
      if (h != first_dt) uniform_dt = false;
      const double threshold = cfg.c * std::pow(h, cfg.beta);
      const double phi = eval_scaled(cfg.kernel, path.values[i + 1] - path.values[i], threshold);
      if (phi != 0.0) ++kept;
      const double ind = std::abs(path.values[i]) <= std::pow(h, -cfg.k_ind) ? 1.0 : 0.0;
      double w = phi * ind;
      if (cfg.weight_by_variance) {
        const double a = model.diffusion(path.values[i]);
        w /= a * a * h;
      }
      if (w == 0.0) continue;
      x0.push_back(path.values[i]);
      x1.push_back(path.values[i + 1]);
      dt.push_back(h);
      weight.push_back(w);
      if (is_stable) {
        const double alpha = model.levy.alpha;
        const double corr = std::pow(h, 1.0 + cfg.beta * (1.0 - alpha)) *
                            std::pow(cfg.c, 1.0 - alpha) *
                            std::pow(std::abs(model.jump_coeff(path.values[i])), alpha) *
                            j_value;
        stable_corr.push_back(corr);
      }
    }
    kept_fraction = static_cast<double>(kept) / static_cast<double>(n);

    // Snap steps that differ only by float rounding so per-dt caches hit.
    const double href = (path.times[n] - path.times[0]) / static_cast<double>(n);
    bool uniform = true;
    for (double h : dt)
      if (std::abs(h - href) > 1e-12 * href) {
        uniform = false;
        break;
      }
    uniform_dt = uniform;
    if (uniform)
      for (double& h : dt) h = href;
  }

  double eval(const ModelSpec& model, const MomentApprox& approx, Theta th) const {
    const std::size_t n = x0.size();
    double sum = 0.0;
    switch (approx.kind) {
      case MomentApprox::Kind::Euler:
      case MomentApprox::Kind::StableCorrected: {
        const bool stable = approx.kind == MomentApprox::Kind::StableCorrected;
        const double rate = model.levy.mean_jump_rate();
        if (model.affine) {
          const double comp = model.gamma_const * rate;
          for (std::size_t i = 0; i < n; ++i) {
            double r = x1[i] - x0[i] - dt[i] * (th.th1 * x0[i] + th.th2 - comp);
            if (stable) r -= stable_corr[i];
            sum += weight[i] * r * r;
          }
        } else {
          for (std::size_t i = 0; i < n; ++i) {
            double b = model.drift(th, x0[i]) - model.jump_coeff(x0[i]) * rate;
            double r = x1[i] - x0[i] - dt[i] * b;
            if (stable) r -= stable_corr[i];
            sum += weight[i] * r * r;
          }
        }
        return sum;
      }
      case MomentApprox::Kind::KesslerOuExact: {
        if (!model.affine)
          throw std::invalid_argument("KesslerOuExact requires the affine model");
        if (th.th1 == 0.0)
          throw std::domain_error("contrast: th1 = 0 is degenerate for KesslerOuExact");
        const double w_drift = model.gamma_const * model.levy.mean_jump_rate();
        const double mu = (w_drift - th.th2) / th.th1;
        double last_dt = -1.0, e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (dt[i] != last_dt) {
            last_dt = dt[i];
            e = std::exp(th.th1 * dt[i]);
          }
          const double m = (x0[i] - mu) * e + mu;
          const double r = x1[i] - m;
          sum += weight[i] * r * r;
        }
        return sum;
      }
      default: {
        for (std::size_t i = 0; i < n; ++i) {
          const double r = x1[i] - approx.value(model, th, x0[i], dt[i]);
          sum += weight[i] * r * r;
        }
        return sum;
      }
    }
  }

  // Closed-form stationary point of the Euler-residual quadratic; exact
  // minimizer for the affine Euler contrast, warm start otherwise.
  Theta wls_euler(const ModelSpec& model, const ThetaBox& box) const {
    const double rate = model.levy.mean_jump_rate();
    double a11 = 0, a12 = 0, a22 = 0, v1 = 0, v2 = 0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const double r = x1[i] - x0[i] + dt[i] * model.jump_coeff(x0[i]) * rate;
      const double w = weight[i] * dt[i] * dt[i];
      a11 += w * x0[i] * x0[i];
      a12 += w * x0[i];
      a22 += w;
      v1 += weight[i] * dt[i] * x0[i] * r;
      v2 += weight[i] * dt[i] * r;
    }
    const double det = a11 * a22 - a12 * a12;
    Theta th{0.5 * (box.th1[0] + box.th1[1]), 0.5 * (box.th2[0] + box.th2[1])};
    if (std::abs(det) > 1e-14 * std::max(1.0, std::abs(a11 * a22))) {
      th.th1 = (v1 * a22 - v2 * a12) / det;
      th.th2 = (a11 * v2 - a12 * v1) / det;
    }
    return th;
  }
};

}  // namespace

void ContrastConfig::validate() const {
  if (beta <= 0.0 || beta >= 0.5)
    throw std::invalid_argument("ContrastConfig: beta must be in (0, 1/2)");
  if (c <= 0.0) throw std::invalid_argument("ContrastConfig: c must be > 0");
  if (k_ind <= 0.0) throw std::invalid_argument("ContrastConfig: k_ind must be > 0");
}

double contrast_value(const SamplePath& path, Theta theta, const ModelSpec& model,
                      const MomentApprox& approx, const ContrastConfig& cfg) {
  cfg.validate();
  PreparedContrast prep;
  prep.build(path, model, approx, cfg);
  return prep.eval(model, approx, theta);
}

EstimateResult minimize_contrast(const SamplePath& path, const ModelSpec& model,
                                 const MomentApprox& approx, const ContrastConfig& cfg,
                                 const ThetaBox& box) {
  cfg.validate();
  if (box.th1[0] > box.th1[1] || box.th2[0] > box.th2[1])
    throw std::invalid_argument("minimize_contrast: empty theta box");
  PreparedContrast prep;
  prep.build(path, model, approx, cfg);

  // Keep th1 away from the KesslerOuExact degeneracy.
  Point2 lo{box.th1[0], box.th2[0]};
  Point2 hi{box.th1[1], box.th2[1]};
  if (approx.kind == MomentApprox::Kind::KesslerOuExact) {
    constexpr double kExclusion = 1e-6;
    if (lo[0] > -kExclusion && hi[0] >= -kExclusion && lo[0] <= kExclusion)
      throw std::invalid_argument("minimize_contrast: theta box crosses th1 = 0");
    if (hi[0] > -kExclusion && lo[0] < 0.0) hi[0] = -kExclusion;
    if (lo[0] < kExclusion && lo[0] > 0.0) lo[0] = kExclusion;
  }

  const Theta start = prep.wls_euler(model, box);
  auto objective = [&](Point2 p) {
    return prep.eval(model, approx, Theta{p[0], p[1]});
  };
  const NmResult nm = nelder_mead_box(objective, Point2{start.th1, start.th2}, lo, hi);

  EstimateResult out;
  out.theta = Theta{nm.x[0], nm.x[1]};
  out.contrast_at_opt = nm.f;
  out.kept_fraction = prep.kept_fraction;
  out.iterations = nm.evals;
  out.converged = nm.converged;
  return out;
}

Theta2StableResult estimate_theta2_stable(const SamplePath& path, double theta1_fixed,
                                          const ModelSpec& model,
                                          const ContrastConfig& cfg) {
  cfg.validate();
  path.validate();
  if (model.levy.kind != LevyMeasure::Kind::TemperedStable)
    throw std::invalid_argument("estimate_theta2_stable: requires tempered-stable jumps");
  if (!model.affine)
    throw std::invalid_argument("estimate_theta2_stable: requires the affine model");
  const std::size_t n = path.size() - 1;
  if (n < 1) throw std::invalid_argument("estimate_theta2_stable: need >= 2 observations");
  const double dt = (path.times[n] - path.times[0]) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(path.times[i + 1] - path.times[i] - dt) > 1e-9 * dt)
      throw std::invalid_argument("estimate_theta2_stable: requires a uniform grid");

  const double threshold = cfg.c * std::pow(dt, cfg.beta);
  double sum_phi = 0.0, sum_num = 0.0;
  long kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double incr = path.values[i + 1] - path.values[i];
    const double phi = eval_scaled(cfg.kernel, incr, threshold);
    if (phi != 0.0) ++kept;
    sum_phi += phi;
    sum_num += (incr - dt * theta1_fixed * path.values[i]) * phi;
  }
  if (sum_phi <= 0.0)
    throw std::runtime_error("estimate_theta2_stable: kernel weight sum <= 0");

  const double alpha = model.levy.alpha;
  const double gamma = model.gamma_const;
  const double euler = sum_num / (dt * sum_phi) + gamma * gamma_tail(alpha).value;
  const double corr = std::pow(dt, cfg.beta * (1.0 - alpha)) *
                      std::pow(cfg.c, 1.0 - alpha) * std::pow(std::abs(gamma), alpha) *
                      kernel_fractional_moment(cfg.kernel, alpha).value;

  Theta2StableResult out;
  out.theta2_euler = euler;
  out.theta2 = euler - corr;
  out.kept_fraction = static_cast<double>(kept) / static_cast<double>(n);
  return out;
}

StepConditionDiag check_step_condition(long n, double dt, int order) {
  if (n < 1 || dt <= 0.0)
    throw std::invalid_argument("check_step_condition: need n >= 1 and dt > 0");
  StepConditionDiag diag;
  diag.value = std::sqrt(static_cast<double>(n)) * std::pow(dt, order - 0.5);
  diag.warn = diag.value > 1.0;
  return diag;
}

}  // namespace driftfit

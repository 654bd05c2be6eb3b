#include "driftfit/moment_approx.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "driftfit/jet.hpp"
#include "driftfit/levy_integrals.hpp"
#include "driftfit/parallel.hpp"
#include "driftfit/sde_sim.hpp"

namespace driftfit {
namespace {

struct KesslerJets {
  Jet b_bar, a_sq;
  std::array<Jet, 2> b_grad;
  bool with_grad = false;
};

KesslerJets load_jets(const ModelSpec& model, Theta theta, double x, int order,
                      bool with_grad) {
  if (!model.drift_jet || !model.diffusion_jet)
    throw std::invalid_argument("m_kessler_generic: model does not supply coefficient jets");
  KesslerJets jets;
  jets.b_bar = Jet(model.drift_jet(theta, x, order));
  if (jets.b_bar.order() < order)
    throw std::invalid_argument("m_kessler_generic: insufficient drift jet order");
  const double rate = model.levy.mean_jump_rate();
  if (rate != 0.0) {
    if (!model.jump_coeff_jet)
      throw std::invalid_argument("m_kessler_generic: model does not supply jump coefficient jets");
    jets.b_bar = jet_add(jets.b_bar, jet_scale(Jet(model.jump_coeff_jet(x, order)), -rate));
  }
  Jet a(model.diffusion_jet(x, order));
  if (a.order() < order)
    throw std::invalid_argument("m_kessler_generic: insufficient diffusion jet order");
  jets.a_sq = jet_mul(a, a, order);
  if (with_grad) {
    if (!model.drift_theta_grad_jet)
      throw std::invalid_argument("m_theta_grad: model does not supply drift gradient jets");
    auto grads = model.drift_theta_grad_jet(theta, x, order);
    jets.b_grad = {Jet(grads[0]), Jet(grads[1])};
    jets.with_grad = true;
  }
  return jets;
}

Jet apply_generator(const KesslerJets& jets, const Jet& f, int order) {
  const Jet f1 = f.derivative();
  const Jet f2 = f1.derivative();
  return jet_add(jet_mul(jets.b_bar, f1, order),
                 jet_scale(jet_mul(jets.a_sq, f2, order), 0.5));
}

// d/dtheta_i of Abar_c(f): (d b_bar) f' + b_bar (d f)' + a^2 (d f)'' / 2.
Jet apply_generator_grad(const KesslerJets& jets, const Jet& f, const Jet& df,
                         int i, int order) {
  const Jet f1 = f.derivative();
  const Jet df1 = df.derivative();
  const Jet df2 = df1.derivative();
  Jet out = jet_mul(jets.b_grad[static_cast<std::size_t>(i)], f1, order);
  out = jet_add(out, jet_mul(jets.b_bar, df1, order));
  return jet_add(out, jet_scale(jet_mul(jets.a_sq, df2, order), 0.5));
}

double stable_correction(const ModelSpec& model, double x, double dt, double beta,
                         double c, const TruncationKernel& kernel, double j_value) {
  const double alpha = model.levy.alpha;
  if (j_value < 0.0) j_value = kernel_fractional_moment(kernel, alpha).value;
  const double gamma_x = model.jump_coeff(x);
  return std::pow(dt, 1.0 + beta * (1.0 - alpha)) * std::pow(c, 1.0 - alpha) *
         std::pow(std::abs(gamma_x), alpha) * j_value;
}

}  // namespace

MomentApprox MomentApprox::euler() {
  MomentApprox a;
  a.kind = Kind::Euler;
  return a;
}

MomentApprox MomentApprox::kessler_ou_exact() {
  MomentApprox a;
  a.kind = Kind::KesslerOuExact;
  return a;
}

MomentApprox MomentApprox::kessler_generic(int order) {
  if (order < 1) throw std::invalid_argument("kessler_generic: order must be >= 1");
  MomentApprox a;
  a.kind = Kind::KesslerGeneric;
  a.order = order;
  return a;
}

MomentApprox MomentApprox::stable_corrected(double beta, double c,
                                            TruncationKernel kernel) {
  MomentApprox a;
  a.kind = Kind::StableCorrected;
  a.beta = beta;
  a.c = c;
  a.kernel = kernel;
  return a;
}

MomentApprox MomentApprox::mc_oracle(double beta, double c, TruncationKernel kernel,
                                     long paths, std::uint64_t seed, int workers) {
  MomentApprox a;
  a.kind = Kind::McOracle;
  a.beta = beta;
  a.c = c;
  a.kernel = kernel;
  a.mc_paths = paths;
  a.mc_seed = seed;
  a.mc_workers = workers;
  return a;
}

void MomentApprox::prepare(const ModelSpec& model) {
  if (kind == Kind::StableCorrected && precomputed_j < 0.0)
    precomputed_j = kernel_fractional_moment(kernel, model.levy.alpha).value;
}

double MomentApprox::value(const ModelSpec& model, Theta theta, double x,
                           double dt) const {
  switch (kind) {
    case Kind::Euler:
      return m_euler(model, theta, x, dt);
    case Kind::KesslerOuExact: {
      if (!model.affine)
        throw std::invalid_argument("KesslerOuExact requires the affine model");
      const double w = model.gamma_const * model.levy.mean_jump_rate();
      return m_kessler_ou_exact(theta, x, dt, w);
    }
    case Kind::KesslerGeneric:
      return m_kessler_generic(model, theta, x, dt, order);
    case Kind::StableCorrected:
      return m_stable_corrected(model, theta, x, dt, beta, c, kernel, precomputed_j);
    case Kind::McOracle:
      return m_mc_oracle(model, theta, x, dt, beta, c, kernel, mc_paths, mc_seed,
                         mc_workers)
          .estimate;
  }
  throw std::logic_error("MomentApprox::value: bad kind");
}

std::array<double, 2> MomentApprox::theta_grad(const ModelSpec& model, Theta theta,
                                               double x, double dt) const {
  return m_theta_grad(*this, model, theta, x, dt);
}

double m_euler(const ModelSpec& model, Theta theta, double x, double dt) {
  if (dt < 0.0) throw std::invalid_argument("m_euler: dt must be >= 0");
  return x + dt * drift_compensated(model, theta, x);
}

double m_kessler_ou_exact(Theta theta, double x, double dt, double jump_mean_drift) {
  if (theta.th1 == 0.0)
    throw std::domain_error("m_kessler_ou_exact: th1 = 0 is degenerate");
  const double w = jump_mean_drift;
  return (x + theta.th2 / theta.th1 - w / theta.th1) * std::exp(theta.th1 * dt) +
         (w - theta.th2) / theta.th1;
}

double m_kessler_generic(const ModelSpec& model, Theta theta, double x, double dt,
                         int order) {
  if (order < 1) throw std::invalid_argument("m_kessler_generic: order must be >= 1");
  const int jet_order = 2 * order;
  const KesslerJets jets = load_jets(model, theta, x, jet_order, false);
  Jet f = Jet::displacement(jet_order);
  double m = x;
  double dt_pow = 1.0, factorial = 1.0;
  for (int k = 1; k <= order; ++k) {
    f = apply_generator(jets, f, jet_order);
    dt_pow *= dt;
    factorial *= k;
    m += f.value() * dt_pow / factorial;
  }
  return m;
}

double m_stable_corrected(const ModelSpec& model, Theta theta, double x, double dt,
                          double beta, double c, const TruncationKernel& kernel,
                          double precomputed_j) {
  if (model.levy.kind != LevyMeasure::Kind::TemperedStable)
    throw std::invalid_argument("m_stable_corrected: requires tempered-stable jumps");
  if (dt == 0.0) return x;
  return x + dt * drift_compensated(model, theta, x) +
         stable_correction(model, x, dt, beta, c, kernel, precomputed_j);
}

McOracleResult m_mc_oracle(const ModelSpec& model, Theta theta, double x, double dt,
                           double beta, double c, const TruncationKernel& kernel,
                           long n_paths, std::uint64_t seed, int workers) {
  if (n_paths < 1000) throw std::invalid_argument("m_mc_oracle: need at least 1e3 paths");
  if (dt == 0.0) return {x, 0.0};

  SimScheme scheme;
  scheme.substeps = static_cast<int>(std::ceil(dt / 1e-3));
  scheme.ts_var_budget = 1e-13;  // inner bias must stay below the Monte Carlo SE
  PathSimulator sim(model, scheme);
  sim.prepare_step(dt);

  const double threshold = c * std::pow(dt, beta);
  const long n_chunks = 512;
  struct Sums {
    double w = 0, y = 0, ww = 0, yy = 0, yw = 0;
  };
  std::vector<Sums> partial(static_cast<std::size_t>(n_chunks));

  parallel_for(n_chunks, workers, [&](long chunk) {
    const long begin = chunk * n_paths / n_chunks;
    const long end = (chunk + 1) * n_paths / n_chunks;
    Sums s;
    for (long j = begin; j < end; ++j) {
      const std::uint64_t path_seed =
          Rng::derive(seed, static_cast<std::uint64_t>(j), rng_channel::kOraclePath)();
      const double xe = sim.terminal(theta, x, dt, path_seed);
      const double w = eval_scaled(kernel, xe - x, threshold);
      s.w += w;
      s.y += w * xe;
      s.ww += w * w;
      s.yy += w * xe * w * xe;
      s.yw += w * xe * w;
    }
    partial[static_cast<std::size_t>(chunk)] = s;
  });

  Sums total;
  for (const Sums& s : partial) {
    total.w += s.w;
    total.y += s.y;
    total.ww += s.ww;
    total.yy += s.yy;
    total.yw += s.yw;
  }
  if (total.w <= 0.0)
    throw std::runtime_error("m_mc_oracle: kernel weight sum <= 0; increase paths");

  const double n = static_cast<double>(n_paths);
  const double w_bar = total.w / n;
  const double y_bar = total.y / n;
  const double ratio = y_bar / w_bar;
  // Delta method on the ratio of means.
  const double var_y = total.yy / n - y_bar * y_bar;
  const double var_w = total.ww / n - w_bar * w_bar;
  const double cov_yw = total.yw / n - y_bar * w_bar;
  const double var_ratio =
      (var_y - 2.0 * ratio * cov_yw + ratio * ratio * var_w) / (w_bar * w_bar * n);
  return {ratio, std::sqrt(std::max(var_ratio, 0.0))};
}

std::array<double, 2> m_theta_grad(const MomentApprox& approx, const ModelSpec& model,
                                   Theta theta, double x, double dt) {
  switch (approx.kind) {
    case MomentApprox::Kind::Euler:
    case MomentApprox::Kind::StableCorrected: {
      // The stable correction is theta-free, so both share dt * d b/d theta.
      const auto g = model.drift_theta_grad(theta, x);
      return {dt * g[0], dt * g[1]};
    }
    case MomentApprox::Kind::KesslerOuExact: {
      if (theta.th1 == 0.0)
        throw std::domain_error("m_theta_grad: th1 = 0 is degenerate for KesslerOuExact");
      const double w = model.gamma_const * model.levy.mean_jump_rate();
      const double e = std::exp(theta.th1 * dt);
      const double q = (theta.th2 - w) / theta.th1;
      // d/dth1 [(x+q)e] + d/dth1 [-q] with dq/dth1 = -q/th1.
      const double d1 = (-q / theta.th1) * e + (x + q) * dt * e + q / theta.th1;
      const double d2 = (e - 1.0) / theta.th1;
      return {d1, d2};
    }
    case MomentApprox::Kind::KesslerGeneric: {
      const int jet_order = 2 * approx.order;
      const KesslerJets jets = load_jets(model, theta, x, jet_order, true);
      Jet f = Jet::displacement(jet_order);
      Jet df1(jet_order), df2(jet_order);
      double g1 = 0.0, g2 = 0.0;
      double dt_pow = 1.0, factorial = 1.0;
      for (int k = 1; k <= approx.order; ++k) {
        const Jet next_df1 = apply_generator_grad(jets, f, df1, 0, jet_order);
        const Jet next_df2 = apply_generator_grad(jets, f, df2, 1, jet_order);
        f = apply_generator(jets, f, jet_order);
        df1 = next_df1;
        df2 = next_df2;
        dt_pow *= dt;
        factorial *= k;
        g1 += df1.value() * dt_pow / factorial;
        g2 += df2.value() * dt_pow / factorial;
      }
      return {g1, g2};
    }
    case MomentApprox::Kind::McOracle:
      throw std::invalid_argument("m_theta_grad: McOracle has no derivative contract");
  }
  throw std::logic_error("m_theta_grad: bad kind");
}

}  // namespace driftfit

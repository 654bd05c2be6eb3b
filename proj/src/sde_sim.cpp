#include "driftfit/sde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "driftfit/levy_integrals.hpp"

namespace driftfit {

namespace detail {

void TsJumpSampler::build(double a, double e) {
  alpha = a;
  eps = e;
  tail_intensity = ts_tail_intensity(a, e).value;
  if (eps < 1.0) {
    w_pareto = (std::pow(eps, -a) - 1.0) / a;
    z0 = 1.0;
  } else {
    w_pareto = 0.0;
    z0 = eps;
  }
  w_exp = std::pow(z0, -1.0 - a) * std::exp(-z0);
}

double TsJumpSampler::draw(Rng& rng) const {
  const double total = w_pareto + w_exp;
  for (;;) {
    if (rng.uniform() * total < w_pareto) {
      const double u = rng.uniform();
      const double ea = std::pow(eps, -alpha);
      const double z = std::pow(ea - u * (ea - 1.0), -1.0 / alpha);
      if (rng.uniform() < std::exp(-z)) return z;
    } else {
      const double z = z0 + rng.exponential();
      if (rng.uniform() < std::pow(z / z0, -1.0 - alpha)) return z;
    }
  }
}

}  // namespace detail

std::vector<std::pair<double, double>> sample_cp_jumps(double lambda, double mu_j,
                                                       double sigma_j, double t_a,
                                                       double t_b, Rng& rng) {
  if (lambda < 0.0) throw std::invalid_argument("sample_cp_jumps: lambda must be >= 0");
  if (t_b <= t_a) throw std::invalid_argument("sample_cp_jumps: empty interval");
  std::vector<std::pair<double, double>> jumps;
  if (lambda == 0.0) return jumps;
  const long count = rng.poisson(lambda * (t_b - t_a));
  jumps.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const double t = t_a + (t_b - t_a) * rng.uniform();
    const double z = mu_j + sigma_j * rng.normal();
    jumps.emplace_back(t, z);
  }
  std::sort(jumps.begin(), jumps.end());
  return jumps;
}

double ts_default_cutoff(double alpha, double dt, double var_budget) {
  if (dt <= 0.0) throw std::invalid_argument("ts_default_cutoff: dt must be > 0");
  const double eps = std::pow((2.0 - alpha) * var_budget / dt, 1.0 / (2.0 - alpha));
  return std::clamp(eps, 1e-12, 0.5);
}

double sample_ts_increment(double alpha, double dt, double eps, Rng& rng) {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw std::invalid_argument("sample_ts_increment: alpha must be in (0,1)");
  if (dt < 0.0) throw std::invalid_argument("sample_ts_increment: dt must be >= 0");
  if (eps <= 0.0) throw std::invalid_argument("sample_ts_increment: eps must be > 0");
  if (dt == 0.0) return 0.0;
  thread_local detail::TsJumpSampler sampler;
  if (sampler.alpha != alpha || sampler.eps != eps) {
    sampler.build(alpha, eps);
    if (sampler.tail_intensity <= 0.0)
      std::fprintf(stderr,
                   "driftfit: warning: cutoff eps=%g retains no jumps; the increment "
                   "is just the compensator -dt*Gamma(1-alpha)\n",
                   eps);
  }
  const long count = rng.poisson(dt * sampler.tail_intensity);
  double sum = 0.0;
  for (long i = 0; i < count; ++i) sum += sampler.draw(rng);
  return sum - dt * std::tgamma(1.0 - alpha);
}

PathSimulator::PathSimulator(const ModelSpec& model, SimScheme scheme)
    : model_(model), scheme_(scheme) {
  if (scheme_.substeps < 1)
    throw std::invalid_argument("SimScheme: substeps must be >= 1");
  if (scheme_.exact_ou && !model_.affine)
    throw std::invalid_argument("exact_ou requested for non-affine model");
  if (scheme_.exact_ou && model_.levy.kind == LevyMeasure::Kind::TemperedStable)
    throw std::invalid_argument("exact_ou is not available with tempered-stable jumps");
}

PathSimulator::TsParams PathSimulator::make_ts_params(double h) const {
  TsParams params;
  params.h = h;
  const double eps = ts_default_cutoff(model_.levy.alpha, h, scheme_.ts_var_budget);
  params.sampler.build(model_.levy.alpha, eps);
  params.compensator_rate = std::tgamma(1.0 - model_.levy.alpha);
  if (params.sampler.tail_intensity <= 0.0)
    std::fprintf(stderr,
                 "driftfit: warning: tempered-stable cutoff eps=%g retains no jumps; "
                 "the compensator drift dominates\n",
                 eps);
  return params;
}

void PathSimulator::prepare_step(double dt) {
  if (model_.levy.kind != LevyMeasure::Kind::TemperedStable) return;
  const double h = dt / scheme_.substeps;
  for (const auto& p : ts_cache_)
    if (p.h == h) return;
  ts_cache_.push_back(make_ts_params(h));
}

const PathSimulator::TsParams* PathSimulator::ts_params_for(double dt) const {
  const double h = dt / scheme_.substeps;
  for (const auto& p : ts_cache_)
    if (p.h == h) return &p;
  return nullptr;
}

double PathSimulator::step_interval(Theta theta, double x, double t0, double t1,
                                    Rng& diff, Rng& jumps, const TsParams* ts) const {
  const int m = scheme_.substeps;
  const double dt = t1 - t0;
  const double h = dt / m;
  const double sqrt_h = std::sqrt(h);

  // Jump times/sizes over the whole observation interval; applied on the
  // refined grid with gamma at the left sub-step state (cadlag convention).
  std::vector<std::pair<double, double>> jump_list;
  double comp_rate = 0.0;  // int z F dz, folded into the drift
  switch (model_.levy.kind) {
    case LevyMeasure::Kind::None:
      break;
    case LevyMeasure::Kind::GaussianCP:
      jump_list = sample_cp_jumps(model_.levy.lambda, model_.levy.mu_j,
                                  model_.levy.sigma_j, t0, t1, jumps);
      comp_rate = model_.levy.lambda * model_.levy.mu_j;
      break;
    case LevyMeasure::Kind::TemperedStable: {
      const long count = jumps.poisson(dt * ts->sampler.tail_intensity);
      jump_list.reserve(static_cast<std::size_t>(count));
      for (long i = 0; i < count; ++i)
        jump_list.emplace_back(t0 + dt * jumps.uniform(), 0.0);
      std::sort(jump_list.begin(), jump_list.end());
      for (auto& j : jump_list) j.second = ts->sampler.draw(jumps);
      comp_rate = ts->compensator_rate;
      break;
    }
  }

  std::size_t next_jump = 0;
  for (int k = 0; k < m; ++k) {
    const double s1 = (k + 1 == m) ? t1 : t0 + (k + 1) * h;
    const double x_left = x;
    double drift = model_.drift(theta, x_left);
    if (comp_rate != 0.0) drift -= model_.jump_coeff(x_left) * comp_rate;
    x += drift * h + model_.diffusion(x_left) * sqrt_h * diff.normal();
    while (next_jump < jump_list.size() && jump_list[next_jump].first <= s1) {
      x += model_.jump_coeff(x_left) * jump_list[next_jump].second;
      ++next_jump;
    }
  }
  return x;
}

double PathSimulator::step_interval_exact_ou(Theta theta, double x, double t0,
                                             double t1, Rng& diff, Rng& jumps) const {
  const double dt = t1 - t0;
  const double sigma = model_.sigma_const;
  const double gamma = model_.gamma_const;
  const double th2_eff = theta.th2 - gamma * model_.levy.mean_jump_rate();

  double mean, var;
  if (theta.th1 != 0.0) {
    const double e = std::exp(theta.th1 * dt);
    const double mu = -th2_eff / theta.th1;
    mean = mu + (x - mu) * e;
    var = sigma * sigma * (e * e - 1.0) / (2.0 * theta.th1);
  } else {
    mean = x + th2_eff * dt;
    var = sigma * sigma * dt;
  }
  double out = mean + std::sqrt(std::max(var, 0.0)) * diff.normal();

  if (model_.levy.kind == LevyMeasure::Kind::GaussianCP) {
    const auto jump_list = sample_cp_jumps(model_.levy.lambda, model_.levy.mu_j,
                                           model_.levy.sigma_j, t0, t1, jumps);
    for (const auto& [s, z] : jump_list)
      out += gamma * z * std::exp(theta.th1 * (t1 - s));
  }
  return out;
}

SamplePath PathSimulator::simulate(Theta theta, double x0,
                                   const std::vector<double>& grid,
                                   std::uint64_t seed) const {
  if (grid.size() < 2 || grid.front() != 0.0)
    throw std::invalid_argument("simulate: grid must start at 0 with >= 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("simulate: grid must be strictly increasing");

  Rng diff = Rng::derive(seed, 0, rng_channel::kDiffusion);
  Rng jumps = Rng::derive(seed, 0, rng_channel::kJumps);

  SamplePath path;
  path.times = grid;
  path.values.resize(grid.size());
  path.values[0] = x0;

  const bool is_ts = model_.levy.kind == LevyMeasure::Kind::TemperedStable;
  TsParams local;
  double x = x0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (scheme_.exact_ou) {
      x = step_interval_exact_ou(theta, x, grid[i], grid[i + 1], diff, jumps);
    } else {
      const TsParams* ts = nullptr;
      if (is_ts) {
        const double dt = grid[i + 1] - grid[i];
        ts = ts_params_for(dt);
        if (ts == nullptr) {
          if (local.h != dt / scheme_.substeps) local = make_ts_params(dt / scheme_.substeps);
          ts = &local;
        }
      }
      x = step_interval(theta, x, grid[i], grid[i + 1], diff, jumps, ts);
    }
    path.values[i + 1] = x;
  }
  return path;
}

double PathSimulator::terminal(Theta theta, double x0, double dt,
                               std::uint64_t seed) const {
  Rng diff = Rng::derive(seed, 0, rng_channel::kDiffusion);
  Rng jumps = Rng::derive(seed, 0, rng_channel::kJumps);
  if (scheme_.exact_ou) return step_interval_exact_ou(theta, x0, 0.0, dt, diff, jumps);
  const TsParams* ts = nullptr;
  TsParams local;
  if (model_.levy.kind == LevyMeasure::Kind::TemperedStable) {
    ts = ts_params_for(dt);
    if (ts == nullptr) {
      local = make_ts_params(dt / scheme_.substeps);
      ts = &local;
    }
  }
  return step_interval(theta, x0, 0.0, dt, diff, jumps, ts);
}

SamplePath simulate_path(const ModelSpec& model, Theta theta0, double x0,
                         const std::vector<double>& grid, const SimScheme& scheme,
                         std::uint64_t seed) {
  PathSimulator sim(model, scheme);
  if (grid.size() >= 2 && model.levy.kind == LevyMeasure::Kind::TemperedStable)
    sim.prepare_step(grid[1] - grid[0]);
  return sim.simulate(theta0, x0, grid, seed);
}

std::vector<double> uniform_grid(double t_final, long n) {
  if (n < 1 || t_final <= 0.0) throw std::invalid_argument("uniform_grid: bad arguments");
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i)
    grid[static_cast<std::size_t>(i)] = t_final * static_cast<double>(i) / static_cast<double>(n);
  return grid;
}

}  // namespace driftfit

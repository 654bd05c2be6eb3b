#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "driftfit/model.hpp"
#include "driftfit/rng.hpp"
#include "driftfit/sample_path.hpp"

namespace driftfit {

struct SimScheme {
  int substeps = 10;
  bool exact_ou = false;
  // Per-substep variance budget for the neglected small-jump remainder of the
  // tempered-stable sampler; drives the cutoff eps.
  double ts_var_budget = 1e-8;
};

// Compound-Poisson jumps on (t_a, t_b]: Poisson(lambda*(t_b-t_a)) count,
// times uniform, sizes N(mu_j, sigma_j^2). Sorted by time.
std::vector<std::pair<double, double>> sample_cp_jumps(double lambda, double mu_j,
                                                       double sigma_j, double t_a,
                                                       double t_b, Rng& rng);

// Cutoff eps keeping the neglected small-jump variance dt*int_0^eps z^2 F <=
// dt*eps^{2-a}/(2-a) below var_budget for a step of length dt.
double ts_default_cutoff(double alpha, double dt, double var_budget = 1e-8);

namespace detail {

// Jumps above eps of the tempered-stable measure e^{-z} z^{-1-a} dz, sampled
// by rejection from a Pareto branch on (eps,1) and an exponential branch on
// (max(1,eps), inf).
struct TsJumpSampler {
  double alpha = 0.0;
  double eps = 0.0;
  double tail_intensity = 0.0;  // int_eps^inf F(z) dz
  double w_pareto = 0.0;
  double z0 = 1.0;
  double w_exp = 0.0;

  void build(double alpha, double eps);
  double draw(Rng& rng) const;
};

}  // namespace detail

// One compensated tempered-stable increment over a step of length dt:
// sum of jumps above eps minus the full compensator dt * Gamma(1-alpha).
// Mean is -dt * int_0^eps z F(z) dz (small, controlled by the cutoff).
double sample_ts_increment(double alpha, double dt, double eps, Rng& rng);

// Reusable simulator: Levy-integral lookups are computed once per step size
// and shared across paths, so tight Monte Carlo loops stay cheap.
class PathSimulator {
 public:
  PathSimulator(const ModelSpec& model, SimScheme scheme);

  // Precompute cutoff/intensity for observation step dt (substeps applied
  // inside). Call before concurrent use for every distinct dt; simulate()
  // falls back to a per-path build otherwise.
  void prepare_step(double dt);

  // Path on the given observation grid (strictly increasing from 0).
  SamplePath simulate(Theta theta, double x0, const std::vector<double>& grid,
                      std::uint64_t seed) const;

  // Terminal value only; used by Monte Carlo conditional-moment estimation.
  double terminal(Theta theta, double x0, double dt, std::uint64_t seed) const;

 private:
  struct TsParams {
    double h = -1.0;  // substep length the parameters were built for
    detail::TsJumpSampler sampler;
    double compensator_rate = 0.0;  // Gamma(1-alpha)
  };

  double step_interval(Theta theta, double x, double t0, double t1, Rng& diff,
                       Rng& jumps, const TsParams* ts) const;
  double step_interval_exact_ou(Theta theta, double x, double t0, double t1,
                                Rng& diff, Rng& jumps) const;
  const TsParams* ts_params_for(double dt) const;
  TsParams make_ts_params(double h) const;

  ModelSpec model_;
  SimScheme scheme_;
  std::vector<TsParams> ts_cache_;
};

// Convenience one-shot wrapper around PathSimulator.
SamplePath simulate_path(const ModelSpec& model, Theta theta0, double x0,
                         const std::vector<double>& grid, const SimScheme& scheme,
                         std::uint64_t seed);

// Uniform grid 0, T/n, ..., T.
std::vector<double> uniform_grid(double t_final, long n);

}  // namespace driftfit

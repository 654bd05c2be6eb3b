#include "driftfit/mc_harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "driftfit/parallel.hpp"

namespace driftfit {
namespace {

std::string format_csv_row(const RepRow& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%ld,%llu,%.17g,%.17g,%.17g,%.17g,%d\n", r.rep,
                static_cast<unsigned long long>(r.seed), r.theta.th1, r.theta.th2,
                r.contrast, r.kept_fraction, r.converged ? 1 : 0);
  return buf;
}

RepRow run_one(const ExperimentConfig& cfg, const PathSimulator& sim,
               const std::vector<double>& grid, long rep) {
  RepRow row;
  row.rep = rep;
  row.seed = Rng::derive(cfg.seed, static_cast<std::uint64_t>(rep),
                         rng_channel::kReplication)();
  row.theta2_euler = std::numeric_limits<double>::quiet_NaN();
  try {
    const SamplePath path = sim.simulate(cfg.theta0, cfg.x0, grid, row.seed);
    if (cfg.frozen_theta1 &&
        cfg.approx.kind == MomentApprox::Kind::StableCorrected) {
      const auto est = estimate_theta2_stable(path, *cfg.frozen_theta1, cfg.model,
                                              cfg.contrast);
      row.theta.th1 = *cfg.frozen_theta1;
      row.theta.th2 = est.theta2;
      row.theta2_euler = est.theta2_euler;
      row.kept_fraction = est.kept_fraction;
      row.contrast = contrast_value(path, row.theta, cfg.model, cfg.approx, cfg.contrast);
      row.converged = true;
    } else {
      ThetaBox box = cfg.box;
      if (cfg.frozen_theta1) {
        box.th1 = {*cfg.frozen_theta1, *cfg.frozen_theta1};
      }
      const EstimateResult est =
          minimize_contrast(path, cfg.model, cfg.approx, cfg.contrast, box);
      row.theta = est.theta;
      row.contrast = est.contrast_at_opt;
      row.kept_fraction = est.kept_fraction;
      row.converged = est.converged;
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

}  // namespace

SummaryRow summarize(const std::string& label, const std::vector<RepRow>& rows) {
  SummaryRow s;
  s.label = label;
  double m1 = 0, m2 = 0;
  for (const RepRow& r : rows) {
    if (!r.ok) {
      ++s.failed;
      continue;
    }
    ++s.reps_used;
    m1 += r.theta.th1;
    m2 += r.theta.th2;
  }
  if (s.reps_used == 0) throw std::runtime_error("summarize: no successful replications");
  m1 /= static_cast<double>(s.reps_used);
  m2 /= static_cast<double>(s.reps_used);
  s.mean1 = m1;
  s.mean2 = m2;
  if (s.reps_used == 1) {
    s.single_rep = true;
  } else {
    double v1 = 0, v2 = 0;
    for (const RepRow& r : rows) {
      if (!r.ok) continue;
      v1 += (r.theta.th1 - m1) * (r.theta.th1 - m1);
      v2 += (r.theta.th2 - m2) * (r.theta.th2 - m2);
    }
    s.std1 = std::sqrt(v1 / static_cast<double>(s.reps_used - 1));
    s.std2 = std::sqrt(v2 / static_cast<double>(s.reps_used - 1));
  }
  return s;
}

std::string reps_to_csv(const std::vector<RepRow>& rows) {
  std::string out = "rep,seed,theta1_hat,theta2_hat,contrast,kept_fraction,converged\n";
  for (const RepRow& r : rows) out += format_csv_row(r);
  return out;
}

std::string summary_to_csv(const SummaryRow& s) {
  char buf[320];
  std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%ld,%.3f\n",
                s.label.c_str(), s.mean1, s.std1, s.mean2, s.std2, s.reps_used,
                s.runtime_s);
  return std::string("label,mean1,std1,mean2,std2,reps,runtime_s\n") + buf;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  if (cfg.replications < 1)
    throw std::invalid_argument("run_experiment: replications must be >= 1");
  const auto t_start = std::chrono::steady_clock::now();

  const std::vector<double> grid =
      cfg.custom_grid.empty() ? uniform_grid(cfg.t_final, cfg.n_obs) : cfg.custom_grid;

  ExperimentConfig local = cfg;
  local.approx.prepare(local.model);

  PathSimulator sim(local.model, local.scheme);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) sim.prepare_step(grid[i + 1] - grid[i]);

  ExperimentResult result;
  result.rows.resize(static_cast<std::size_t>(cfg.replications));
  parallel_for(cfg.replications, cfg.workers, [&](long rep) {
    result.rows[static_cast<std::size_t>(rep)] = run_one(local, sim, grid, rep);
  });

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream reps(std::filesystem::path(out_dir) / "reps.csv", std::ios::binary);
    if (!reps) throw std::runtime_error("run_experiment: cannot write reps.csv");
    reps << reps_to_csv(result.rows);
    reps.close();
  }

  for (const RepRow& r : result.rows)
    if (!r.ok)
      std::fprintf(stderr, "driftfit: replication %ld (seed %llu) failed: %s\n", r.rep,
                   static_cast<unsigned long long>(r.seed), r.error.c_str());

  result.summary = summarize(cfg.label, result.rows);
  result.summary.runtime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  if (!out_dir.empty()) {
    std::ofstream summary(std::filesystem::path(out_dir) / "summary.csv",
                          std::ios::binary);
    if (!summary) throw std::runtime_error("run_experiment: cannot write summary.csv");
    summary << summary_to_csv(result.summary);
  }
  return result;
}

FisherReference fisher_reference(const ModelSpec& model, Theta theta0, double horizon_t,
                                 const FisherOptions& options) {
  if (horizon_t <= 0.0)
    throw std::invalid_argument("fisher_reference: horizon must be > 0");
  const long n = static_cast<long>(options.t_ref / options.dt_ref);
  SimScheme scheme;
  scheme.substeps = 1;
  PathSimulator sim(model, scheme);
  sim.prepare_step(options.dt_ref);
  const SamplePath path =
      sim.simulate(theta0, 0.0, uniform_grid(options.t_ref, n), options.seed);

  // Discard an initial stretch so the average starts near stationarity.
  const std::size_t burn = path.size() / 20;
  double i11 = 0, i12 = 0, i22 = 0, mean_x = 0, mean_xx = 0;
  long count = 0;
  for (std::size_t i = burn; i < path.size(); ++i) {
    const double x = path.values[i];
    const auto g = model.drift_theta_grad(theta0, x);
    const double a = model.diffusion(x);
    const double inv_a2 = 1.0 / (a * a);
    i11 += g[0] * g[0] * inv_a2;
    i12 += g[0] * g[1] * inv_a2;
    i22 += g[1] * g[1] * inv_a2;
    mean_x += x;
    mean_xx += x * x;
    ++count;
  }
  i11 /= count;
  i12 /= count;
  i22 /= count;
  mean_x /= count;
  mean_xx /= count;

  if (model.affine && model.levy.kind == LevyMeasure::Kind::None && theta0.th1 < 0.0) {
    const double mu = -theta0.th2 / theta0.th1;
    const double var = model.sigma_const * model.sigma_const / (-2.0 * theta0.th1);
    const double ex2 = var + mu * mu;
    if (std::abs(mean_x - mu) > 0.05 * std::max(1.0, std::abs(mu)) ||
        std::abs(mean_xx - ex2) > 0.10 * std::max(1.0, ex2))
      std::fprintf(stderr,
                   "driftfit: warning: ergodic moments (%.4f, %.4f) disagree with the "
                   "stationary values (%.4f, %.4f)\n",
                   mean_x, mean_xx, mu, ex2);
  }

  const double det = i11 * i22 - i12 * i12;
  if (!(std::abs(det) > 1e-12 * std::max(1.0, std::abs(i11 * i22))))
    throw std::runtime_error("fisher_reference: singular information matrix");

  FisherReference ref;
  ref.info = {{{i11, i12}, {i12, i22}}};
  ref.std_at_T = {std::sqrt(i22 / det / horizon_t), std::sqrt(i11 / det / horizon_t)};
  ref.theta2_only_std_at_T = 1.0 / std::sqrt(i22 * horizon_t);
  return ref;
}

}  // namespace driftfit

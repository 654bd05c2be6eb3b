#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "driftfit/contrast.hpp"
#include "driftfit/model.hpp"
#include "driftfit/moment_approx.hpp"
#include "driftfit/sde_sim.hpp"

namespace driftfit {

struct ExperimentConfig {
  ModelSpec model;
  Theta theta0;
  double x0 = 4.0;
  double t_final = 2000.0;
  long n_obs = 10000;
  std::vector<double> custom_grid;  // optional; overrides t_final/n_obs
  SimScheme scheme;
  MomentApprox approx;
  ContrastConfig contrast;
  ThetaBox box;
  std::optional<double> frozen_theta1;
  long replications = 500;
  std::uint64_t seed = 1;
  int workers = 0;
  std::string label = "experiment";
};

struct RepRow {
  long rep = 0;
  std::uint64_t seed = 0;
  Theta theta;
  double contrast = 0.0;
  double kept_fraction = 0.0;
  bool converged = false;
  bool ok = false;
  std::string error;
  // Uncorrected companion of the explicit theta2 estimator (frozen-theta1
  // tempered-stable runs); NaN otherwise. Not part of the CSV schema.
  double theta2_euler = 0.0;
};

struct SummaryRow {
  std::string label;
  double mean1 = 0.0, std1 = 0.0;
  double mean2 = 0.0, std2 = 0.0;
  long reps_used = 0;
  double runtime_s = 0.0;
  bool single_rep = false;  // std reported as 0 from one replication
  long failed = 0;
};

struct ExperimentResult {
  std::vector<RepRow> rows;
  SummaryRow summary;
};

// Replication j simulates with seed hash(master seed, j) and estimates; rows
// land in fixed slots, so the output is identical for any worker count.
// Failed replications are recorded with their seed and excluded from the
// summary. If out_dir is non-empty, reps.csv is written before summarizing
// and summary.csv after.
ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                const std::string& out_dir = "");

SummaryRow summarize(const std::string& label, const std::vector<RepRow>& rows);

std::string reps_to_csv(const std::vector<RepRow>& rows);
std::string summary_to_csv(const SummaryRow& summary);

struct FisherOptions {
  double t_ref = 1e5;
  double dt_ref = 0.01;
  std::uint64_t seed = 20240901;
};

struct FisherReference {
  std::array<std::array<double, 2>, 2> info{};  // I(theta) = E_pi[b_dot b_dot^T / a^2]
  std::array<double, 2> std_at_T{};             // sqrt(diag(I^{-1}) / T)
  double theta2_only_std_at_T = 0.0;            // 1 / sqrt(I_22 T)
};

// Ergodic-average estimate of the asymptotic Fisher information, inverted and
// scaled to the horizon T. For the affine no-jump model the ergodic moments
// are cross-checked against the analytic stationary mean/variance.
FisherReference fisher_reference(const ModelSpec& model, Theta theta0, double horizon_t,
                                 const FisherOptions& options = {});

}  // namespace driftfit

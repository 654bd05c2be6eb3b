#include <cstdio>
#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "driftfit/config.hpp"
#include "driftfit/contrast.hpp"
#include "driftfit/kernels.hpp"
#include "driftfit/mc_harness.hpp"
#include "driftfit/sde_sim.hpp"

namespace {

int cmd_simulate(const std::string& config_file, const std::string& out_file,
                 std::uint64_t seed, bool seed_given) {
  auto cfg = driftfit::load_experiment_config(config_file);
  const auto grid = driftfit::uniform_grid(cfg.t_final, cfg.n_obs);
  const auto path = driftfit::simulate_path(cfg.model, cfg.theta0, cfg.x0, grid,
                                            cfg.scheme, seed_given ? seed : cfg.seed);
  path.save_csv(out_file);
  std::printf("wrote %zu observations to %s\n", path.size(), out_file.c_str());
  return 0;
}

int cmd_estimate(const std::string& path_file, const std::string& config_file,
                 const std::string& out_file) {
  auto cfg = driftfit::load_experiment_config(config_file);
  const auto path = driftfit::SamplePath::load_csv(path_file);

  nlohmann::json out;
  if (cfg.frozen_theta1 &&
      cfg.approx.kind == driftfit::MomentApprox::Kind::StableCorrected) {
    const auto est = driftfit::estimate_theta2_stable(path, *cfg.frozen_theta1,
                                                      cfg.model, cfg.contrast);
    const driftfit::Theta theta{*cfg.frozen_theta1, est.theta2};
    out["theta1"] = theta.th1;
    out["theta2"] = theta.th2;
    out["theta2_euler"] = est.theta2_euler;
    out["contrast"] =
        driftfit::contrast_value(path, theta, cfg.model, cfg.approx, cfg.contrast);
    out["kept_fraction"] = est.kept_fraction;
    out["converged"] = true;
  } else {
    driftfit::ThetaBox box = cfg.box;
    if (cfg.frozen_theta1) box.th1 = {*cfg.frozen_theta1, *cfg.frozen_theta1};
    const auto est =
        driftfit::minimize_contrast(path, cfg.model, cfg.approx, cfg.contrast, box);
    out["theta1"] = est.theta.th1;
    out["theta2"] = est.theta.th2;
    out["contrast"] = est.contrast_at_opt;
    out["kept_fraction"] = est.kept_fraction;
    out["converged"] = est.converged;
  }

  if (out_file.empty() || out_file == "-") {
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    std::ofstream f(out_file);
    f << out.dump(2) << "\n";
    std::printf("wrote %s\n", out_file.c_str());
  }
  return 0;
}

int cmd_experiment(const std::string& config_file, long reps, int workers,
                   const std::string& out_dir) {
  auto cfg = driftfit::load_experiment_config(config_file);
  if (reps > 0) cfg.replications = reps;
  cfg.workers = workers;
  const auto result = driftfit::run_experiment(cfg, out_dir);
  const auto& s = result.summary;
  std::printf("%s: theta1 %.4f (%.4f)  theta2 %.4f (%.4f)  reps %ld", s.label.c_str(),
              s.mean1, s.std1, s.mean2, s.std2, s.reps_used);
  if (s.failed > 0) std::printf("  [%ld failed, excluded]", s.failed);
  std::printf("  %.1fs\n", s.runtime_s);
  return 0;
}

int cmd_kernel_dump(const std::string& kind, int l, double d, long points,
                    const std::string& out_file) {
  driftfit::TruncationKernel kernel;
  if (kind == "phi0")
    kernel = driftfit::TruncationKernel::phi0();
  else if (kind == "osc")
    kernel = driftfit::TruncationKernel::oscillating(l, d);
  else
    throw CLI::ValidationError("--kind must be phi0 or osc");

  const double s = kernel.support_bound();
  std::ofstream f(out_file, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + out_file);
  f << "x,phi\n";
  char buf[80];
  for (long i = 0; i < points; ++i) {
    const double x = -s + 2.0 * s * static_cast<double>(i) / static_cast<double>(points - 1);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x, kernel(x));
    f << buf;
  }
  std::printf("wrote %ld kernel samples to %s\n", points, out_file.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftfit: drift estimation for discretely observed jump diffusions"};
  app.require_subcommand(1);

  std::string config_file, out_path, path_file, kernel_kind = "osc";
  std::uint64_t seed = 0;
  long reps = 0, points = 2001;
  int workers = 0, osc_l = 3;
  double osc_d = 3.0;

  auto* sim = app.add_subcommand("simulate", "simulate a path and write CSV");
  sim->add_option("--config", config_file, "experiment JSON")->required();
  sim->add_option("--out", out_path, "output CSV")->required();
  auto* seed_opt = sim->add_option("--seed", seed, "override the config seed");

  auto* est = app.add_subcommand("estimate", "estimate theta from a path CSV");
  est->add_option("--path", path_file, "input path CSV")->required();
  est->add_option("--config", config_file, "experiment JSON")->required();
  est->add_option("--out", out_path, "output JSON ('-' for stdout)");

  auto* exp = app.add_subcommand("experiment", "run a replicated experiment");
  exp->add_option("--config", config_file, "experiment JSON")->required();
  exp->add_option("--reps", reps, "replication count override");
  exp->add_option("--workers", workers, "worker threads (0 = hardware)");
  exp->add_option("--out", out_path, "output directory")->required();

  auto* dump = app.add_subcommand("kernel-dump", "sample a truncation kernel to CSV");
  dump->add_option("--kind", kernel_kind, "phi0 | osc");
  dump->add_option("--l", osc_l, "oscillating order");
  dump->add_option("--d", osc_d, "oscillating dilation");
  dump->add_option("--points", points, "grid size");
  dump->add_option("--out", out_path, "output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_file, out_path, seed, seed_opt->count() > 0);
    if (est->parsed()) return cmd_estimate(path_file, config_file, out_path);
    if (exp->parsed()) return cmd_experiment(config_file, reps, workers, out_path);
    if (dump->parsed()) return cmd_kernel_dump(kernel_kind, osc_l, osc_d, points, out_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "driftfit: error: %s\n", e.what());
    return 1;
  }
  return 0;
}

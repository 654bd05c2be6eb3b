#include "driftfit/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace driftfit {
namespace {

using nlohmann::json;

LevyMeasure parse_jumps(const json& j) {
  const std::string type = j.value("type", "none");
  if (type == "none") return LevyMeasure::none();
  if (type == "gaussian_cp")
    return LevyMeasure::gaussian_cp(j.at("lambda").get<double>(),
                                    j.value("mu_j", 0.0), j.value("sigma_j", 1.0));
  if (type == "tempered_stable")
    return LevyMeasure::tempered_stable(j.at("alpha").get<double>());
  throw std::invalid_argument("config: unknown jumps.type '" + type + "'");
}

TruncationKernel parse_kernel(const json& j) {
  const std::string kind = j.value("kind", "phi0");
  if (kind == "phi0") return TruncationKernel::phi0();
  if (kind == "none") return TruncationKernel::identity();
  if (kind == "osc")
    return TruncationKernel::oscillating(j.value("l", 3), j.value("d", 3.0));
  throw std::invalid_argument("config: unknown kernel.kind '" + kind + "'");
}

MomentApprox parse_approx(const json& est, const TruncationKernel& kernel) {
  const std::string name = est.value("m_approx", "euler");
  const double beta = est.value("beta", 0.49);
  const double c = est.value("c", 1.0);
  if (name == "euler") return MomentApprox::euler();
  if (name == "kessler_ou") return MomentApprox::kessler_ou_exact();
  if (name == "kessler_generic")
    return MomentApprox::kessler_generic(est.value("order", 3));
  if (name == "stable_corrected")
    return MomentApprox::stable_corrected(beta, c, kernel);
  if (name == "mc_oracle")
    return MomentApprox::mc_oracle(beta, c, kernel, est.value("mc_paths", 100000L),
                                   est.value("mc_seed", 1ULL));
  throw std::invalid_argument("config: unknown estimator.m_approx '" + name + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json root = json::parse(json_text);
  ExperimentConfig cfg;

  const json& model = root.at("model");
  const std::string drift = model.value("drift", "affine");
  if (drift != "affine")
    throw std::invalid_argument("config: only the affine drift is built in");
  cfg.theta0 = Theta{model.at("theta1").get<double>(), model.at("theta2").get<double>()};
  cfg.model = make_affine_model(model.value("sigma", 0.3), model.value("gamma", 0.0),
                                model.contains("jumps") ? parse_jumps(model.at("jumps"))
                                                        : LevyMeasure::none());

  if (root.contains("sampling")) {
    const json& s = root.at("sampling");
    cfg.t_final = s.value("t_final", cfg.t_final);
    cfg.n_obs = s.value("n", cfg.n_obs);
    cfg.x0 = s.value("x0", cfg.x0);
    cfg.scheme.substeps = s.value("substeps", cfg.scheme.substeps);
    cfg.scheme.exact_ou = s.value("exact_ou", cfg.scheme.exact_ou);
    cfg.scheme.ts_var_budget = s.value("ts_var_budget", cfg.scheme.ts_var_budget);
  }

  if (root.contains("estimator")) {
    const json& est = root.at("estimator");
    cfg.contrast.kernel =
        est.contains("kernel") ? parse_kernel(est.at("kernel")) : TruncationKernel::phi0();
    cfg.contrast.beta = est.value("beta", cfg.contrast.beta);
    cfg.contrast.c = est.value("c", cfg.contrast.c);
    cfg.contrast.k_ind = est.value("k_ind", cfg.contrast.k_ind);
    cfg.contrast.weight_by_variance = est.value("weighted", false);
    cfg.approx = parse_approx(est, cfg.contrast.kernel);
    if (est.contains("theta_box")) {
      const json& box = est.at("theta_box");
      if (box.contains("theta1"))
        cfg.box.th1 = {box.at("theta1").at(0).get<double>(),
                       box.at("theta1").at(1).get<double>()};
      if (box.contains("theta2"))
        cfg.box.th2 = {box.at("theta2").at(0).get<double>(),
                       box.at("theta2").at(1).get<double>()};
    }
    if (est.contains("frozen") && est.at("frozen").contains("theta1"))
      cfg.frozen_theta1 = est.at("frozen").at("theta1").get<double>();
  }

  if (root.contains("mc")) {
    const json& mc = root.at("mc");
    cfg.replications = mc.value("replications", cfg.replications);
    cfg.seed = mc.value("seed", cfg.seed);
  }
  if (root.contains("label")) cfg.label = root.at("label").get<std::string>();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& filename) {
  std::ifstream in(filename);
  if (!in) throw std::runtime_error("config: cannot open " + filename);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

}  // namespace driftfit

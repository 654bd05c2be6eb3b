// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "driftfit/contrast.hpp"
#include "driftfit/kernels.hpp"
#include "driftfit/levy_integrals.hpp"
#include "driftfit/mc_harness.hpp"
#include "driftfit/moment_approx.hpp"
#include "driftfit/parallel.hpp"
#include "driftfit/sde_sim.hpp"

using namespace driftfit;

namespace {

struct Criterion {
  int id;
  std::string name;
  bool pass = true;
  std::vector<std::string> notes;
  double runtime_s = 0.0;

  void expect(bool ok, const std::string& detail) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "  ok   " : "  FAIL ") + detail);
  }
  void info(const std::string& detail) { notes.push_back("       " + detail); }
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------

void criterion_1_kernel_moments(Criterion& c) {
  struct Probe {
    int l;
    double d;
  };
  for (const Probe p : {Probe{2, 3.0}, Probe{3, 3.0}}) {
    const auto kernel = TruncationKernel::oscillating(p.l, p.d);
    for (int k = 0; k <= p.l; ++k) {
      const double m = kernel_moment(kernel, k);
      c.expect(std::abs(m) <= 1e-8,
               fmt("phi(%d,%g) moment k=%d: |%.3e| <= 1e-8", p.l, p.d, k, m));
      if (p.l % 2 == 0 && k == p.l && std::abs(m) > 1e-8) {
        // The alternating sum only kills m < l; for even l the l-th moment
        // equals c_d^{-1} l! q(q^l-1)/(q-1) int x^l phi0, q = d/2, and cannot
        // vanish for any plateau function.
        const double q = 0.5 * p.d;
        const double i_l = kernel_moment(TruncationKernel::phi0(), p.l);
        const double predicted = (1.0 / osc_normalizer(p.l)) * 2.0 * q *
                                 (std::pow(q, p.l) - 1.0) / (q - 1.0) * i_l;
        c.info(fmt("even-l construction remainder: predicted %.6f, measured %.6f",
                   predicted, m));
      }
    }
  }
}

ExperimentConfig table1_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.model = make_affine_model(0.3, 0.0, LevyMeasure::none());
  cfg.theta0 = Theta{-0.5, 2.0};
  cfg.x0 = 4.0;
  cfg.t_final = 2000.0;
  cfg.n_obs = 10000;
  cfg.scheme.substeps = 10;
  cfg.contrast.kernel = TruncationKernel::identity();  // no jumps: no truncation
  cfg.replications = 500;
  cfg.seed = seed;
  return cfg;
}

SummaryRow g_table1_euler, g_table1_kessler;  // reused by criterion 5

void criterion_2_table1(Criterion& c) {
  auto cfg = table1_config(1001);
  cfg.label = "table1_euler";
  cfg.approx = MomentApprox::euler();
  const auto euler = run_experiment(cfg);
  cfg.label = "table1_kessler";
  cfg.approx = MomentApprox::kessler_ou_exact();
  const auto kessler = run_experiment(cfg);
  g_table1_euler = euler.summary;
  g_table1_kessler = kessler.summary;

  const auto& e = euler.summary;
  const auto& k = kessler.summary;
  c.expect(std::abs(e.mean1 - (-0.4783)) <= 0.006,
           fmt("euler mean1 %.4f within 0.006 of -0.4783", e.mean1));
  c.expect(std::abs(e.mean2 - 1.9133) <= 0.025,
           fmt("euler mean2 %.4f within 0.025 of 1.9133", e.mean2));
  c.expect(std::abs(k.mean1 - (-0.5021)) <= 0.006,
           fmt("kessler mean1 %.4f within 0.006 of -0.5021", k.mean1));
  c.expect(std::abs(k.mean2 - 2.0084) <= 0.025,
           fmt("kessler mean2 %.4f within 0.025 of 2.0084", k.mean2));

  const double ref_std[4] = {0.0213, 0.0856, 0.0236, 0.0947};
  const double got_std[4] = {e.std1, e.std2, k.std1, k.std2};
  const char* names[4] = {"euler std1", "euler std2", "kessler std1", "kessler std2"};
  for (int i = 0; i < 4; ++i)
    c.expect(got_std[i] >= 0.7 * ref_std[i] && got_std[i] <= 1.3 * ref_std[i],
             fmt("%s %.4f within 30%% of %.4f", names[i], got_std[i], ref_std[i]));
  c.info(fmt("failed replications: %ld + %ld", e.failed, k.failed));
}

SummaryRow g_table3_phi0, g_table3_phi3;

void criterion_3_table3(Criterion& c) {
  ExperimentConfig cfg = table1_config(3003);
  cfg.model = make_affine_model(0.3, 1.0, LevyMeasure::gaussian_cp(1.0, 0.0, std::sqrt(2.0)));
  cfg.approx = MomentApprox::kessler_ou_exact();
  cfg.contrast.beta = 0.49;
  cfg.contrast.c = 1.0;

  cfg.label = "table3_phi0";
  cfg.contrast.kernel = TruncationKernel::phi0();
  const auto phi0 = run_experiment(cfg);
  cfg.label = "table3_phi3";
  cfg.contrast.kernel = TruncationKernel::oscillating(3, 3.0);
  const auto phi3 = run_experiment(cfg);
  g_table3_phi0 = phi0.summary;
  g_table3_phi3 = phi3.summary;

  const auto& s0 = phi0.summary;
  const auto& s3 = phi3.summary;
  c.expect(s0.mean1 >= -0.475 && s0.mean1 <= -0.450,
           fmt("phi0 mean1 %.4f in [-0.475, -0.450] (biased)", s0.mean1));
  c.expect(std::abs(s3.mean1 - (-0.5)) <= 0.01,
           fmt("phi(3,3) mean1 %.4f within 0.01 of -0.5", s3.mean1));
  c.expect(s3.std1 > s0.std1, fmt("std1 ordering: %.4f > %.4f", s3.std1, s0.std1));
  c.expect(s3.std2 > s0.std2, fmt("std2 ordering: %.4f > %.4f", s3.std2, s0.std2));
  c.info(fmt("phi0  (%.4f (%.4f), %.4f (%.4f))", s0.mean1, s0.std1, s0.mean2, s0.std2));
  c.info(fmt("phi3  (%.4f (%.4f), %.4f (%.4f))", s3.mean1, s3.std1, s3.mean2, s3.std2));
  c.info(fmt("failed replications: %ld + %ld", s0.failed, s3.failed));
}

struct Table4Row {
  double alpha;
  double mean_corrected, std_corrected;
  double mean_euler;
};
std::vector<Table4Row> g_table4;

void criterion_4_table4(Criterion& c) {
  g_table4.clear();
  for (double alpha : {0.1, 0.3, 0.5}) {
    ExperimentConfig cfg;
    cfg.model = make_affine_model(0.3, 1.0, LevyMeasure::tempered_stable(alpha));
    cfg.theta0 = Theta{-0.5, 2.0};
    cfg.x0 = 4.0;
    cfg.t_final = 100.0;
    cfg.n_obs = 10000;
    cfg.scheme.substeps = 10;
    cfg.scheme.ts_var_budget = 1e-13;  // keep the small-jump mean offset negligible
    cfg.contrast.kernel = TruncationKernel::phi0();
    cfg.contrast.beta = 0.49;
    cfg.contrast.c = 1.0;
    cfg.approx = MomentApprox::stable_corrected(0.49, 1.0, cfg.contrast.kernel);
    cfg.frozen_theta1 = -0.5;
    cfg.replications = 500;
    cfg.seed = 4004 + static_cast<std::uint64_t>(alpha * 10);
    cfg.label = fmt("table4_alpha%.1f", alpha);
    const auto result = run_experiment(cfg);

    const double dt = cfg.t_final / static_cast<double>(cfg.n_obs);
    const double corr = std::pow(dt, 0.49 * (1.0 - alpha)) *
                        kernel_fractional_moment(cfg.contrast.kernel, alpha).value;
    double mean_euler = 0.0;
    long used = 0;
    double max_identity_gap = 0.0;
    for (const auto& row : result.rows) {
      if (!row.ok) continue;
      mean_euler += row.theta2_euler;
      ++used;
      max_identity_gap =
          std::max(max_identity_gap, std::abs(row.theta2_euler - row.theta.th2 - corr));
    }
    mean_euler /= static_cast<double>(used);

    Table4Row out{alpha, result.summary.mean2, result.summary.std2, mean_euler};
    g_table4.push_back(out);

    c.expect(out.mean_corrected >= 1.94 && out.mean_corrected <= 2.01,
             fmt("alpha=%.1f corrected mean %.4f in [1.94, 2.01]", alpha,
                 out.mean_corrected));
    c.expect(max_identity_gap <= 1e-12,
             fmt("alpha=%.1f per-row identity gap %.2e <= 1e-12", alpha,
                 max_identity_gap));
    c.info(fmt("alpha=%.1f corrected %.4f (%.4f), euler %.4f (bias %.4f), failed %ld",
               alpha, out.mean_corrected, out.std_corrected, out.mean_euler,
               out.mean_euler - 2.0, result.summary.failed));
  }
  c.expect(g_table4[0].mean_euler - 2.0 > 0.10,
           fmt("alpha=0.1 euler bias %.4f > 0.10", g_table4[0].mean_euler - 2.0));
  for (std::size_t i = 0; i + 1 < g_table4.size(); ++i)
    c.expect(g_table4[i + 1].mean_euler > g_table4[i].mean_euler,
             fmt("euler bias increasing: alpha %.1f -> %.1f (%.4f -> %.4f)",
                 g_table4[i].alpha, g_table4[i + 1].alpha, g_table4[i].mean_euler - 2.0,
                 g_table4[i + 1].mean_euler - 2.0));
  c.expect(g_table4[0].mean_euler > 2.0 && g_table4[1].mean_euler > 2.0 &&
               g_table4[2].mean_euler > 2.0,
           "euler bias positive for every alpha");
}

void criterion_5_fisher(Criterion& c) {
  // theta2-only reference: I_22 = 1/sigma^2 for the affine model, so the
  // reference std is sigma/sqrt(T) = 0.03 for the tempered-stable setup.
  const auto ts_model = make_affine_model(0.3, 1.0, LevyMeasure::tempered_stable(0.3));
  const auto ref_ts = fisher_reference(ts_model, Theta{-0.5, 2.0}, 100.0);
  c.info(fmt("fisher theta2-only std reference: %.5f (analytic 0.03)",
             ref_ts.theta2_only_std_at_T));
  c.expect(std::abs(ref_ts.theta2_only_std_at_T - 0.03) < 0.002,
           "fisher reference reproduces sigma/sqrt(T)");
  for (const auto& row : g_table4)
    c.expect(std::abs(row.std_corrected - ref_ts.theta2_only_std_at_T) <=
                 0.20 * ref_ts.theta2_only_std_at_T,
             fmt("alpha=%.1f empirical std %.4f within 20%% of %.4f", row.alpha,
                 row.std_corrected, ref_ts.theta2_only_std_at_T));

  const auto ou_model = make_affine_model(0.3, 0.0, LevyMeasure::none());
  const auto ref_ou = fisher_reference(ou_model, Theta{-0.5, 2.0}, 2000.0);
  c.info(fmt("fisher joint std(theta1) reference: %.5f (analytic 0.0224)",
             ref_ou.std_at_T[0]));
  for (const auto* s : {&g_table1_euler, &g_table1_kessler})
    c.expect(std::abs(s->std1 - ref_ou.std_at_T[0]) <= 0.25 * ref_ou.std_at_T[0],
             fmt("%s std(theta1) %.4f within 25%% of %.4f", s->label.c_str(), s->std1,
                 ref_ou.std_at_T[0]));
}

void criterion_6_expansion_slope(Criterion& c) {
  const double alpha = 0.5, beta = 0.3, cscale = 1.0;
  const auto model = make_affine_model(0.3, 1.0, LevyMeasure::tempered_stable(alpha));
  const auto phi0 = TruncationKernel::phi0();
  const Theta th{-0.5, 2.0};
  const double x = 4.0;
  const std::vector<double> dts{0.04, 0.02, 0.01, 0.005};
  std::vector<double> errs;

  auto stable = MomentApprox::stable_corrected(beta, cscale, phi0);
  stable.prepare(model);

  for (double dt : dts) {
    const auto mc = m_mc_oracle(model, th, x, dt, beta, cscale, phi0, 10'000'000,
                                60000 + static_cast<std::uint64_t>(1e4 * dt));
    const double approx = m_stable_corrected(model, th, x, dt, beta, cscale, phi0,
                                             stable.precomputed_j);
    const double err = std::abs(mc.estimate - approx);
    errs.push_back(err);
    c.expect(mc.std_error < err / 5.0,
             fmt("dt=%.3f MC SE %.2e < err/5 = %.2e", dt, mc.std_error, err / 5.0));
    c.info(fmt("dt=%.3f err %.3e (MC SE %.1e)", dt, err, mc.std_error));
  }
  const double slope = fit_loglog_slope(dts, errs);
  const double target = std::min(2.0 - 2.0 * beta, 1.0 + beta * (2.0 - alpha));
  c.expect(std::abs(slope - target) <= 0.25,
           fmt("log-log slope %.3f within 0.25 of %.3f", slope, target));
}

void criterion_7_gradients(Criterion& c) {
  const auto ou = make_affine_model(0.3, 0.0, LevyMeasure::none());
  const auto ts = make_affine_model(0.3, 1.0, LevyMeasure::tempered_stable(0.5));
  std::vector<MomentApprox> variants{
      MomentApprox::euler(), MomentApprox::kessler_ou_exact(),
      MomentApprox::kessler_generic(3),
      MomentApprox::stable_corrected(0.49, 1.0, TruncationKernel::phi0())};

  Rng rng(777);
  for (auto& approx : variants) {
    const ModelSpec& model =
        approx.kind == MomentApprox::Kind::StableCorrected ? ts : ou;
    approx.prepare(model);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Theta th{-0.2 - 2.0 * rng.uniform(), -3.0 + 6.0 * rng.uniform()};
      const double x = -2.0 + 8.0 * rng.uniform();
      const double dt = 0.01 + 0.3 * rng.uniform();
      const auto analytic = approx.theta_grad(model, th, x, dt);
      for (int i = 0; i < 2; ++i) {
        Theta hi = th, lo = th;
        const double h = 1e-6 * std::max(1.0, std::abs(i == 0 ? th.th1 : th.th2));
        (i == 0 ? hi.th1 : hi.th2) += h;
        (i == 0 ? lo.th1 : lo.th2) -= h;
        const double fd =
            (approx.value(model, hi, x, dt) - approx.value(model, lo, x, dt)) / (2.0 * h);
        worst = std::max(worst,
                         std::abs(analytic[i] - fd) / std::max(1e-8, std::abs(fd)));
      }
    }
    c.expect(worst <= 1e-6, fmt("variant %d worst relative gradient error %.2e <= 1e-6",
                                static_cast<int>(approx.kind), worst));
  }

  const double exact = m_kessler_ou_exact(Theta{-0.5, 2.0}, 5.0, 0.2, 0.0);
  const double k3 = m_kessler_generic(ou, Theta{-0.5, 2.0}, 5.0, 0.2, 3);
  c.expect(std::abs(exact - k3) < 1e-4,
           fmt("K=3 vs exact-OU Taylor residual %.2e < 1e-4 at dt=0.2", exact - k3));
}

void criterion_8_cumulants(Criterion& c) {
  for (double alpha : {0.3, 0.5}) {
    const double dt = 0.01;
    const double eps = ts_default_cutoff(alpha, dt);
    Rng rng(808);
    const long n = 1'000'000;
    double s1 = 0, s2 = 0, s4 = 0;
    std::vector<double> draws(n);
    for (auto& d : draws) d = sample_ts_increment(alpha, dt, eps, rng);
    for (double d : draws) s1 += d;
    const double mean = s1 / n;
    for (double d : draws) {
      const double e = d - mean;
      s2 += e * e;
      s4 += e * e * e * e;
    }
    const double var = s2 / (n - 1.0);
    const double target = dt * std::tgamma(2.0 - alpha);
    const double se_var = std::sqrt((s4 / n - var * var) / n);
    c.expect(std::abs(var - target) <= 3.0 * se_var,
             fmt("alpha=%.1f increment variance %.6g within 3 SE (%.2g) of %.6g", alpha,
                 var, se_var, target));
  }

  // Long-horizon mean of the jump OU with a non-centered jump law.
  const auto model = make_affine_model(0.3, 1.0, LevyMeasure::gaussian_cp(1.0, 0.5, 1.0));
  const int seeds = 32;
  std::vector<double> avgs(seeds);
  parallel_for(seeds, 0, [&](long s) {
    const auto path = simulate_path(model, Theta{-0.5, 2.0}, 4.0,
                                    uniform_grid(2000.0, 10000), SimScheme{},
                                    880000 + static_cast<std::uint64_t>(s));
    double avg = 0.0;
    for (double v : path.values) avg += v;
    avgs[s] = avg / static_cast<double>(path.size());
  });
  double mean = 0.0;
  for (double a : avgs) mean += a;
  mean /= seeds;
  double var = 0.0;
  for (double a : avgs) var += (a - mean) * (a - mean);
  const double se = std::sqrt(var / (seeds - 1.0) / seeds);
  c.expect(std::abs(mean - 4.0) <= 3.0 * se,
           fmt("jump-OU long-path mean %.4f within 3 SE (%.4f) of 4", mean, 3.0 * se));
}

void criterion_9_determinism(Criterion& c) {
  ExperimentConfig cfg;
  cfg.model = make_affine_model(0.3, 1.0, LevyMeasure::gaussian_cp(1.0, 0.0, std::sqrt(2.0)));
  cfg.theta0 = Theta{-0.5, 2.0};
  cfg.x0 = 4.0;
  cfg.t_final = 100.0;
  cfg.n_obs = 500;
  cfg.approx = MomentApprox::kessler_ou_exact();
  cfg.contrast.kernel = TruncationKernel::phi0();
  cfg.replications = 12;
  cfg.seed = 909;
  cfg.label = "determinism";

  namespace fs = std::filesystem;
  const fs::path dir1 = fs::temp_directory_path() / "driftfit_acc_w1";
  const fs::path dir2 = fs::temp_directory_path() / "driftfit_acc_w8";
  cfg.workers = 1;
  const auto r1 = run_experiment(cfg, dir1.string());
  cfg.workers = 8;
  const auto r8 = run_experiment(cfg, dir2.string());

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string reps1 = slurp(dir1 / "reps.csv");
  const std::string reps8 = slurp(dir2 / "reps.csv");
  c.expect(!reps1.empty() && reps1 == reps8,
           fmt("reps.csv bit-identical for 1 vs 8 workers (%zu bytes)", reps1.size()));
  c.expect(reps_to_csv(r1.rows) == reps_to_csv(r8.rows), "in-memory rows identical");
  c.expect(r1.summary.mean1 == r8.summary.mean1 && r1.summary.std1 == r8.summary.std1 &&
               r1.summary.mean2 == r8.summary.mean2 && r1.summary.std2 == r8.summary.std2,
           "summary statistics identical");
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria = {
      {"kernel moment vanishing (phi(2,3), phi(3,3))", criterion_1_kernel_moments},
      {"table 1 reproduction, no jumps, R=500", criterion_2_table1},
      {"table 3 qualitative reproduction, lambda=1, R=500", criterion_3_table3},
      {"table 4 tempered-stable theta2, R=500, c=1", criterion_4_table4},
      {"fisher-variance agreement", criterion_5_fisher},
      {"expansion-order slope, alpha=0.5, beta=0.3", criterion_6_expansion_slope},
      {"gradient/analytics suite", criterion_7_gradients},
      {"simulation cumulants", criterion_8_cumulants},
      {"determinism across worker counts", criterion_9_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c{static_cast<int>(i) + 1, criteria[i].first};
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.pass = false;
      c.notes.push_back(std::string("  FAIL exception: ") + e.what());
    }
    c.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), c.runtime_s);
    for (const auto& note : c.notes) std::printf("%s\n", note.c_str());
    std::fflush(stdout);
    if (!c.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

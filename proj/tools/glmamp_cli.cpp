#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "glmamp/artificial.hpp"
#include "glmamp/gamp.hpp"
#include "glmamp/image.hpp"
#include "glmamp/se.hpp"
#include "glmamp/spectral.hpp"
#include "glmamp/sweep.hpp"

namespace {

using namespace glmamp;

Prior parse_prior(const std::string& s) {
  if (s == "gaussian") return Prior::gaussian();
  if (s.rfind("binary:", 0) == 0) return Prior::binary(std::stod(s.substr(7)));
  if (s == "binary") return Prior::binary(0.5);
  throw CLI::ValidationError("--prior", "expected gaussian or binary:p");
}

Channel parse_channel(const std::string& s) {
  if (s == "pr") return Channel::noiseless_pr();
  if (s.rfind("pr-noisy:", 0) == 0) return Channel::noisy_pr(std::stod(s.substr(9)));
  if (s.rfind("pr-smoothed:", 0) == 0) return Channel::smoothed_pr(std::stod(s.substr(12)));
  throw CLI::ValidationError("--channel", "expected pr, pr-noisy:sigma, or pr-smoothed:eps");
}

std::vector<double> parse_grid(const std::string& s) {
  const auto c1 = s.find(':');
  const auto c2 = s.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw CLI::ValidationError("--delta-grid", "expected lo:hi:step");
  }
  const double lo = std::stod(s.substr(0, c1));
  const double hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
  const double step = std::stod(s.substr(c2 + 1));
  if (!(step > 0.0) || !(hi >= lo)) throw CLI::ValidationError("--delta-grid", "need step > 0 and hi >= lo");
  std::vector<double> grid;
  for (double v = lo; v <= hi + 1e-12; v += step) grid.push_back(v);
  return grid;
}

Preset parse_preset(const std::string& s) {
  if (s == "fig1-gaussian") return Preset::Fig1Gaussian;
  if (s == "fig2-binary") return Preset::Fig2Binary;
  if (s == "fig5-complex") return Preset::Fig5Complex;
  if (s == "cdp") return Preset::Cdp;
  if (s == "custom") return Preset::Custom;
  throw CLI::ValidationError("--preset", "expected fig1-gaussian, fig2-binary, fig5-complex, cdp, or custom");
}

struct CommonOpts {
  std::string preset = "custom";
  std::size_t d = 2000;
  double delta = 0.0;
  std::string delta_grid;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string out;
  int threads = 0;
  double damping = 1.0;
  double stop_tol = 1e-9;
  int max_iter = 200;
  std::string prior = "gaussian";
  std::string channel = "pr";
  std::string denoiser = "identity";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--preset", o.preset, "fig1-gaussian|fig2-binary|fig5-complex|cdp|custom");
  cmd->add_option("--d", o.d, "signal dimension");
  cmd->add_option("--delta", o.delta, "single sampling ratio");
  cmd->add_option("--delta-grid", o.delta_grid, "lo:hi:step sampling-ratio grid");
  cmd->add_option("--trials", o.trials, "Monte-Carlo trials per grid point");
  cmd->add_option("--seed", o.seed, "root RNG seed");
  cmd->add_option("--out", o.out, "output path");
  cmd->add_option("--threads", o.threads, "worker threads (0 = machine parallelism)");
  cmd->add_option("--damping", o.damping, "damping weight on the new iterate, in (0,1]");
  cmd->add_option("--stop-tol", o.stop_tol, "stop when ||x^{t+1}-x^t||^2/d falls below this");
  cmd->add_option("--max-iter", o.max_iter, "iteration cap");
  cmd->add_option("--prior", o.prior, "gaussian | binary:p");
  cmd->add_option("--channel", o.channel, "pr | pr-noisy:sigma | pr-smoothed:eps");
  cmd->add_option("--denoiser", o.denoiser, "identity | bayes");
  cmd->set_config("--config", "", "flat key=value config file; flags override");
}

ExperimentConfig build_config(const CommonOpts& o) {
  ExperimentConfig cfg = preset_config(parse_preset(o.preset));
  cfg.d = o.d;
  if (!o.delta_grid.empty()) cfg.delta_grid = parse_grid(o.delta_grid);
  if (o.delta > 0.0) cfg.delta_grid = {o.delta};
  if (cfg.delta_grid.empty()) throw CLI::ValidationError("--delta", "no sampling ratio given");
  cfg.n_trials = o.trials;
  cfg.seed = o.seed;
  cfg.output_path = o.out;
  cfg.threads = o.threads;
  cfg.damping = o.damping;
  cfg.stop_tol = o.stop_tol;
  cfg.max_iter = o.max_iter;
  if (cfg.preset == Preset::Custom) {
    cfg.prior = parse_prior(o.prior);
    cfg.channel = parse_channel(o.channel);
    cfg.bayes_f = (o.denoiser == "bayes");
  }
  return cfg;
}

int cmd_predict(const CommonOpts& o) {
  const ExperimentConfig cfg = build_config(o);
  const bool complex_case = cfg.preset == Preset::Fig5Complex;
  const double du = complex_case ? delta_u_complex() : delta_u(cfg.channel);
  std::printf("delta,delta_u,lambda_star,a2,informative\n");
  for (double delta : cfg.delta_grid) {
    if (!(delta > du)) {
      std::printf("%.12g,%.12g,nan,0,0\n", delta, du);
      continue;
    }
    Preprocessing tb = complex_case ? optimal_T_bar_complex(delta) : optimal_T_bar(cfg.channel, delta);
    ZsLaw law = complex_case ? make_zs_law_complex(tb) : make_zs_law(cfg.channel, tb);
    SpectralPrediction p = solve_lambda_star(law, delta);
    std::printf("%.12g,%.12g,%.12g,%.12g,%d\n", delta, du, p.lambda_star, p.a2, p.informative ? 1 : 0);
  }
  return 0;
}

int cmd_se(const CommonOpts& o) {
  const ExperimentConfig cfg = build_config(o);
  for (double delta : cfg.delta_grid) {
    Preprocessing tb = optimal_T_bar(cfg.channel, delta);
    ZsLaw law = make_zs_law(cfg.channel, tb);
    SpectralPrediction pred = solve_lambda_star(law, delta);
    std::printf("# delta=%.6g  a2=%.6g\n", delta, pred.a2);
    std::printf("t,mu_X,sig2_X,mu_U,sig2_U,overlap_sq\n");
    DenoiserSupplier sup = [&](const SeState& s) {
      return make_denoiser_pair(cfg.prior, cfg.channel, s, delta, cfg.bayes_f);
    };
    SeState s = se_init(pred.a2, delta);
    for (int t = 0; t <= cfg.max_iter; ++t) {
      const double ov2 = s.mu_X * s.mu_X / std::max(1e-300, s.mu_X * s.mu_X + s.sig2_X);
      std::printf("%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.t, s.mu_X, s.sig2_X, s.mu_U, s.sig2_U, ov2);
      if (s.sig2_X <= 0.0 || s.mu_X > 1e8 || s.sig2_X < 1e-10 * s.mu_X * s.mu_X) {
        std::printf("# terminal: vanishing noise-to-signal ratio (exact recovery)\n");
        break;
      }
      const SeState next = se_step(s, cfg.prior, cfg.channel, sup(s), delta);
      const double diff = std::max(std::abs(next.mu_X - s.mu_X), std::abs(next.sig2_X - s.sig2_X));
      s = next;
      if (diff < 1e-12) {
        std::printf("# fixed point reached\n");
        break;
      }
    }
  }
  return 0;
}

int cmd_simulate(const CommonOpts& o) {
  ExperimentConfig cfg = build_config(o);
  int divergent = 0;
  std::vector<SweepRow> rows = run_sweep(cfg, &divergent);
  const std::string csv = csv_string(rows);
  if (cfg.output_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    emit_csv(rows, cfg.output_path);
  }
  if (divergent > 0) std::fprintf(stderr, "warning: %d divergent trial(s) excluded from the averages\n", divergent);
  return 0;
}

int cmd_artificial(const CommonOpts& o, int T, double alpha) {
  const ExperimentConfig cfg = build_config(o);
  for (double delta : cfg.delta_grid) {
    Preprocessing tb = optimal_T_bar(cfg.channel, delta);
    ZsLaw law = make_zs_law(cfg.channel, tb);
    SpectralPrediction pred = solve_lambda_star(law, delta);
    Phase1Se se1 = phase1_se(law, pred.lambda_star, delta, alpha, std::max(T, 60));
    const double mu_target = std::sqrt(pred.a2) / std::sqrt(delta);
    const double sig2_target = (1.0 - pred.a2) / delta;
    std::printf("# delta=%.6g: phase-1 parameters at T=%d: mu=%.10g (limit %.10g), sig2=%.10g (limit %.10g)\n",
                delta, std::max(T, 60), se1.states.back().mu_X, mu_target, se1.states.back().sig2_X, sig2_target);
    std::printf("trial,gap,overlap_sq_at_T\n");
    DenoiserSupplier sup = [&](const SeState& s) {
      return make_denoiser_pair(cfg.prior, cfg.channel, s, delta, cfg.bayes_f);
    };
    double gap_sum = 0.0;
    for (int trial = 0; trial < cfg.n_trials; ++trial) {
      Rng rng = Rng(cfg.seed).fork(static_cast<std::uint64_t>(trial));
      Instance inst = sample_instance(cfg.prior, cfg.channel, cfg.d, delta, rng);
      SpectralEstimate est = spectral_estimate(inst, tb, rng, &inst.x);
      ArtificialConfig acfg;
      acfg.alpha = alpha;
      acfg.T = T;
      acfg.phase2_iters = 3;
      acfg.true_denoisers = sup;
      ArtificialResult res = artificial_run(inst, acfg, est, pred, tb, cfg.prior, cfg.channel, law, rng);
      const double ov = res.overlaps[static_cast<std::size_t>(T)];
      std::printf("%d,%.12g,%.12g\n", trial, res.gap, ov * ov);
      gap_sum += res.gap;
    }
    std::printf("# mean gap = %.12g over %d trial(s)\n", gap_sum / cfg.n_trials, cfg.n_trials);
  }
  return 0;
}

int cmd_cdp(const CommonOpts& o, const std::string& image_path, int L, const std::string& csv_path) {
  Image img = read_image(image_path);
  ComplexGampConfig cfg;
  cfg.max_iter = o.max_iter;
  cfg.stop_tol = o.stop_tol;
  cfg.damping = o.damping;
  const double delta = o.delta > 0.0 ? o.delta : 2.4;
  ImageExperimentResult res = image_experiment(img, L, delta, cfg, o.seed);
  std::string csv = "channel,spectral_overlap_sq,gamp_overlap_sq\n";
  char buf[96];
  for (std::size_t c = 0; c < res.gamp_overlaps.size(); ++c) {
    std::snprintf(buf, sizeof(buf), "%zu,%.12g,%.12g\n", c, res.spectral_overlaps[c], res.gamp_overlaps[c]);
    csv += buf;
  }
  std::snprintf(buf, sizeof(buf), "mean,%.12g,%.12g\n", res.mean_spectral, res.mean_gamp);
  csv += buf;
  if (csv_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream f(csv_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + csv_path);
    f << csv;
  }
  if (!o.out.empty()) write_image(o.out, res.reconstructed);
  return 0;
}

int cmd_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const char* name) {
    std::printf("%-55s %s\n", name, ok ? "PASS" : "FAIL");
    if (!ok) ++failures;
  };

  {  // Gaussian moments from the quadrature rules
    QuadratureRule gh = gauss_hermite(kDefaultQuadOrder);
    double m2 = 0.0, m4 = 0.0;
    for (int i = 0; i < gh.order; ++i) {
      m2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
      m4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
    }
    check(std::abs(m2 - 1.0) < 1e-10 && std::abs(m4 - 3.0) < 1e-10, "quadrature normal moments");
  }
  {  // adjoint identity on a random dense operator
    Rng rng(7);
    const std::size_t n = 23, d = 17;
    std::vector<double> a(n * d);
    for (double& v : a) v = rng.next_normal();
    DenseOperator<double> op(n, d, a);
    std::vector<double> x(d), u(n);
    for (double& v : x) v = rng.next_normal();
    for (double& v : u) v = rng.next_normal();
    std::vector<double> ax = op.apply(x), atu = op.apply_adjoint(u);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) lhs += ax[i] * u[i];
    for (std::size_t i = 0; i < d; ++i) rhs += x[i] * atu[i];
    check(std::abs(lhs - rhs) < 1e-10, "operator adjoint identity");
  }
  {  // denoiser derivative vs finite differences
    ScalarDenoiser f = bayes_f_star(Prior::binary(0.3), 0.7, 0.4);
    bool ok = true;
    for (double s : {-1.5, -0.2, 0.0, 0.4, 2.0}) {
      const double h = 1e-6;
      const double fd = (f.f(s + h) - f.f(s - h)) / (2.0 * h);
      if (std::abs(fd - f.f_prime(s)) > 1e-5 * std::max(1.0, std::abs(fd))) ok = false;
    }
    check(ok, "denoiser analytic vs finite-difference derivative");
  }
  {  // phase invariance of the aligned overlap
    Rng rng(11);
    std::vector<std::complex<double>> x(64), y(64);
    for (auto& v : x) v = {rng.next_normal(), rng.next_normal()};
    const std::complex<double> rot = std::polar(1.0, 1.234);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = rot * x[i];
    check(std::abs(phase_aligned_overlap(y, x) - 1.0) < 1e-12, "phase-invariant overlap");
  }
  {  // CSV determinism
    ExperimentConfig cfg;
    cfg.d = 150;
    cfg.delta_grid = {3.0};
    cfg.n_trials = 2;
    cfg.seed = 5;
    cfg.max_iter = 5;
    std::vector<SweepRow> r1 = run_sweep(cfg);
    std::vector<SweepRow> r2 = run_sweep(cfg);
    check(csv_string(r1) == csv_string(r2), "sweep determinism (byte-identical CSV)");
  }
  std::printf("%s\n", failures == 0 ? "selftest: all checks passed" : "selftest: FAILURES present");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-retrieval message passing with spectral initialization"};
  app.require_subcommand(1);

  CommonOpts o;
  int art_T = 40;
  double art_alpha = 0.5;
  std::string image_path, csv_path;
  int cdp_L = 3;

  CLI::App* predict = app.add_subcommand("predict", "spectral phase-transition table");
  add_common(predict, o);
  CLI::App* se = app.add_subcommand("se", "deterministic recursion traces and fixed points");
  add_common(se, o);
  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo sweep with CSV output");
  add_common(simulate, o);
  CLI::App* art = app.add_subcommand("artificial-check", "two-phase proof-harness reproduction");
  add_common(art, o);
  art->add_option("--T", art_T, "phase-1 length");
  art->add_option("--alpha", art_alpha, "initial correlation in (0,1)");
  CLI::App* cdp = app.add_subcommand("cdp", "coded-diffraction image experiment");
  add_common(cdp, o);
  cdp->add_option("--image", image_path, "input PPM/PGM image")->required();
  cdp->add_option("--L", cdp_L, "number of diffraction patterns");
  cdp->add_option("--csv", csv_path, "per-channel overlap CSV path");
  CLI::App* selftest = app.add_subcommand("selftest", "fast invariant suite");
  (void)selftest;

  CLI11_PARSE(app, argc, argv);

  try {
    if (predict->parsed()) return cmd_predict(o);
    if (se->parsed()) return cmd_se(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (art->parsed()) return cmd_artificial(o, art_T, art_alpha);
    if (cdp->parsed()) return cmd_cdp(o, image_path, cdp_L, csv_path);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

#include "glmamp/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "glmamp/spectral.hpp"

namespace glmamp {

namespace {

struct TrialOutcome {
  double spectral_ov2 = 0.0;
  double gamp_ov2 = 0.0;
  double iterations = 0.0;
  bool ok = false;
};

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  for (double x : v) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(v.size() - 1));
}

double se_final_overlap_sq(const SeTrace& trace) {
  if (trace.perfect_recovery) return 1.0;
  const SeState& s = trace.fixed_point ? *trace.fixed_point : trace.states.back();
  const double denom = s.mu_X * s.mu_X + s.sig2_X;
  return denom > 0.0 ? s.mu_X * s.mu_X / denom : 0.0;
}

}  // namespace

double complex_se_overlap_sq(double mu) { return mu / (1.0 + mu); }

ExperimentConfig preset_config(Preset preset) {
  ExperimentConfig cfg;
  cfg.preset = preset;
  switch (preset) {
    case Preset::Fig1Gaussian:
      cfg.delta_grid = {2.0, 2.5, 3.0, 3.5, 4.0, 4.5};
      break;
    case Preset::Fig2Binary:
      cfg.prior = Prior::binary(0.5);
      cfg.bayes_f = true;
      cfg.delta_grid = {2.0, 2.5, 3.0, 3.5, 4.0, 4.5};
      break;
    case Preset::Fig5Complex:
      cfg.delta_grid = {1.5, 2.0, 2.5, 3.0};
      break;
    case Preset::Cdp:
      cfg.delta_grid = {2.4};
      break;
    case Preset::Custom:
      break;
  }
  return cfg;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int* divergent_trials) {
  if (config.n_trials < 1) throw std::invalid_argument("run_sweep: n_trials must be >= 1");
  for (std::size_t i = 1; i < config.delta_grid.size(); ++i) {
    if (!(config.delta_grid[i] > config.delta_grid[i - 1])) {
      throw std::invalid_argument("run_sweep: delta grid must be strictly increasing");
    }
  }
  if (!config.delta_grid.empty() && !(config.delta_grid.front() > 0.0)) {
    throw std::invalid_argument("run_sweep: delta grid must be positive");
  }

  const bool complex_case = config.preset == Preset::Fig5Complex;
  std::vector<SweepRow> rows;
  int divergent = 0;

  for (std::size_t di = 0; di < config.delta_grid.size(); ++di) {
    const double delta = config.delta_grid[di];
    SweepRow row;
    row.delta = delta;

    Preprocessing preproc =
        complex_case ? optimal_T_bar_complex(delta) : optimal_T_bar(config.channel, delta, config.order);
    ZsLaw law = complex_case ? make_zs_law_complex(preproc, config.order)
                             : make_zs_law(config.channel, preproc, config.order);
    SpectralPrediction pred = solve_lambda_star(law, delta);
    row.spectral_theory = pred.a2;

    DenoiserSupplier supplier = [&](const SeState& s) {
      return make_denoiser_pair(config.prior, config.channel, s, delta, config.bayes_f, config.order);
    };

    if (complex_case) {
      if (pred.a2 > 0.0) {
        double mu = pred.a2 / (1.0 - pred.a2);
        for (int t = 0; t < config.max_iter && mu <= 1e8; ++t) {
          const double next = complex_se_step(mu, delta, config.order);
          const bool done = std::abs(next - mu) < 1e-10;
          mu = next;
          if (done) break;
        }
        row.gamp_se = complex_se_overlap_sq(mu);
      }
    } else if (pred.a2 > 0.0) {
      SeTrace se = se_fixed_point(se_init(pred.a2, delta), config.prior, config.channel, supplier, delta,
                                  config.max_iter, 1e-10, config.order);
      row.gamp_se = se_final_overlap_sq(se);
    }

    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(config.n_trials));
#pragma omp parallel for schedule(dynamic)
    for (int trial = 0; trial < config.n_trials; ++trial) {
      TrialOutcome& out = outcomes[static_cast<std::size_t>(trial)];
      try {
        Rng rng = Rng(config.seed).fork(di * 100003 + static_cast<std::size_t>(trial));
        if (complex_case) {
          ComplexInstance inst = sample_complex_instance(config.d, delta, rng);
          ComplexSpectralEstimate est = spectral_estimate_complex(*inst.op, inst.y, preproc, rng);
          out.spectral_ov2 = phase_aligned_overlap(est.xs, inst.x);
          ComplexGampConfig ccfg;
          ccfg.max_iter = config.max_iter;
          ccfg.stop_tol = config.stop_tol;
          ccfg.damping = config.damping;
          ccfg.order = config.order;
          if (!(pred.a2 > 0.0)) {
            ccfg.mu0 = 0.01;
            ccfg.x0_scale = 0.1 * std::sqrt(static_cast<double>(config.d));
          }
          ComplexGampTrace trace = complex_gamp_run(inst, ccfg, est.xs, pred.a2, pred.lambda_star, preproc);
          out.gamp_ov2 = trace.overlaps.back();
          out.iterations = static_cast<double>(trace.diffs.size());
        } else {
          Instance inst = sample_instance(config.prior, config.channel, config.d, delta, rng);
          SpectralEstimate est = spectral_estimate(inst, preproc, rng, &inst.x);
          const double ov = signed_overlap(inst.x, est.xs);
          out.spectral_ov2 = ov * ov;
          GampConfig gcfg;
          gcfg.denoisers = supplier;
          gcfg.max_iter = config.max_iter;
          gcfg.stop_tol = config.stop_tol;
          gcfg.damping = config.damping;
          gcfg.order = config.order;
          GampTrace trace = gamp_run(inst, gcfg, est, pred, preproc, config.prior, config.channel);
          out.gamp_ov2 = trace.overlaps.back() * trace.overlaps.back();
          out.iterations = static_cast<double>(trace.diffs.size());
        }
        out.ok = true;
      } catch (const std::exception&) {
        out.ok = false;
      }
    }

    std::vector<double> sp, gp, its;
    for (const TrialOutcome& o : outcomes) {
      if (!o.ok) {
        ++divergent;
        continue;
      }
      sp.push_back(o.spectral_ov2);
      gp.push_back(o.gamp_ov2);
      its.push_back(o.iterations);
    }
    mean_std(sp, row.spectral_mc_mean, row.spectral_mc_std);
    mean_std(gp, row.gamp_mc_mean, row.gamp_mc_std);
    double dummy = 0.0;
    mean_std(its, row.iterations_mean, dummy);
    rows.push_back(row);
  }
  if (divergent_trials) *divergent_trials = divergent;
  return rows;
}

std::string csv_string(const std::vector<SweepRow>& rows) {
  std::string out =
      "delta,spectral_mc_mean,spectral_mc_std,spectral_theory,gamp_mc_mean,gamp_mc_std,gamp_se,iterations_mean\n";
  char buf[64];
  for (const SweepRow& r : rows) {
    const double vals[8] = {r.delta,        r.spectral_mc_mean, r.spectral_mc_std, r.spectral_theory,
                            r.gamp_mc_mean, r.gamp_mc_std,      r.gamp_se,         r.iterations_mean};
    for (int i = 0; i < 8; ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", vals[i]);
      out += buf;
      out += (i == 7) ? '\n' : ',';
    }
  }
  return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit_csv: cannot write " + path);
  out << csv_string(rows);
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace glmamp

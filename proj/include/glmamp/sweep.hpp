#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glmamp/cgamp.hpp"
#include "glmamp/gamp.hpp"
#include "glmamp/models.hpp"

namespace glmamp {

enum class Preset { Custom, Fig1Gaussian, Fig2Binary, Fig5Complex, Cdp };

struct ExperimentConfig {
  Preset preset = Preset::Custom;
  std::size_t d = 2000;
  std::vector<double> delta_grid;
  int n_trials = 20;
  std::uint64_t seed = 1;
  std::string output_path;
  int threads = 0;  // 0: machine parallelism
  double damping = 1.0;
  double stop_tol = 1e-9;
  int max_iter = 200;
  Prior prior = Prior::gaussian();
  Channel channel = Channel::noiseless_pr();
  bool bayes_f = false;
  int order = kDefaultQuadOrder;
};

ExperimentConfig preset_config(Preset preset);

struct SweepRow {
  double delta = 0.0;
  double spectral_mc_mean = 0.0;
  double spectral_mc_std = 0.0;
  double spectral_theory = 0.0;
  double gamp_mc_mean = 0.0;
  double gamp_mc_std = 0.0;
  double gamp_se = 0.0;
  double iterations_mean = 0.0;
};

// For each delta: theory prediction, deterministic-recursion fixed point, and
// n_trials spectral+GAMP simulations. Deterministic given config.seed.
// Divergent trials are excluded from the averages and counted.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, int* divergent_trials = nullptr);

std::string csv_string(const std::vector<SweepRow>& rows);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

// squared-overlap limit of the single-parameter complex recursion
double complex_se_overlap_sq(double mu);

}  // namespace glmamp

#pragma once

#include <vector>

#include "glmamp/gamp.hpp"
#include "glmamp/models.hpp"
#include "glmamp/se.hpp"
#include "glmamp/spectral.hpp"

namespace glmamp {

// Two-phase harness that reconstructs the spectral estimator by iteration:
// phase 1 runs T steps with the linear function pair below, phase 2 switches
// to the supplied estimation denoisers.
struct ArtificialConfig {
  double alpha = 0.5;  // initial correlation of the side-information start
  int T = 40;          // phase-1 length
  int phase2_iters = 3;
  DenoiserSupplier true_denoisers;  // phase-2 schedule, driven by the deterministic recursion
  int order = kDefaultQuadOrder;
};

struct ArtificialResult {
  std::vector<SeState> phase1_se;  // deterministic parameters for t = 0..T
  std::vector<double> betas;       // beta_t for t = 0..T
  double gap = 0.0;                // ||sqrt(d) xhat - sqrt(delta) x^T||^2 / d
  std::vector<double> diffs;       // ||x^{t+1} - x^t||^2/d across both phases
  std::vector<double> overlaps;    // correlation with the signal per iteration
  GampState at_T;
  GampState final;
  std::vector<std::vector<double>> phase2_x;  // phase-2 iterates x^{T+1}, x^{T+2}, ...
};

// x^0 = alpha x + sqrt(1-alpha^2) n, u^0 = A (x^0/beta) / sqrt(delta) with
// beta the measured root-mean-square of x^0
GampState artificial_init(const Instance& instance, double alpha, Rng& rng);

// f(x) = x/beta_t; h(x; y) = sqrt(delta) x T(y)/(lambda* - T(y))
DenoiserPair phase1_functions(double beta_t, double lambda_star, const Preprocessing& preproc, double delta);

// the linear-phase parameter recursion: mu_{t+1} = mu_t/(sqrt(delta) beta_t),
// sig2_{t+1} = (mu_t^2 E{Z^2 G^2/(l-Z)^2} + sig2_t E{Z^2/(l-Z)^2})/beta_t^2,
// beta_{t+1} = sqrt(mu^2 + sig2); mu_0 = alpha, sig2_0 = 1-alpha^2, beta_0 = 1
struct Phase1Se {
  std::vector<SeState> states;
  std::vector<double> betas;
};
Phase1Se phase1_se(const ZsLaw& law, double lambda_star, double delta, double alpha, int T);

ArtificialResult artificial_run(const Instance& instance, const ArtificialConfig& config,
                                const SpectralEstimate& est, const SpectralPrediction& pred,
                                const Preprocessing& preproc, const Prior& prior, const Channel& channel,
                                const ZsLaw& law, Rng& rng);

}  // namespace glmamp

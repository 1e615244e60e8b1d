#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "glmamp/models.hpp"
#include "glmamp/se.hpp"
#include "glmamp/spectral.hpp"

namespace glmamp {

enum class OnsagerMode { Empirical, Deterministic };

struct GampConfig {
  DenoiserSupplier denoisers;
  int max_iter = 200;
  double stop_tol = 1e-9;
  double damping = 1.0;
  OnsagerMode onsager_mode = OnsagerMode::Empirical;
  int order = kDefaultQuadOrder;
};

struct GampState {
  std::vector<double> x_t;
  std::vector<double> u_t;
  double b_t = 0.0;
  double c_t = 0.0;
  int t = 0;
};

struct GampTrace {
  std::vector<double> overlaps;  // signed correlation with the signal, per iteration
  std::vector<double> diffs;     // ||x^{t+1} - x^t||^2 / d
  GampState final;
  bool converged = false;
};

// thrown when an iterate picks up a non-finite entry
class GampDivergence : public std::runtime_error {
 public:
  GampDivergence(int t_, const std::string& what) : std::runtime_error(what), t(t_) {}
  int t;
};

// fixed memory coefficients substituted for the empirical ones
struct OnsagerOverride {
  std::optional<double> c_t;
  std::optional<double> b_next;
};

// x^0 = sqrt(d) xhat / sqrt(delta); u^0 = A f0(x^0)/sqrt(delta)
//   - b0 (sqrt(delta)/lambda*) T(y).(A x^0),  b0 = (1/n) sum_i f0'(x0_i)
GampState gamp_init_spectral(const Instance& instance, const SpectralEstimate& est, const SpectralPrediction& pred,
                             const Preprocessing& preproc, const ScalarDenoiser& f0,
                             std::optional<double> b0_override = std::nullopt);

// One iteration:
//   x^{t+1} = A^T h(u^t; y)/sqrt(delta) - c_t f(x^t),  c_t = (1/n) sum h'
//   u^{t+1} = A f_next(x^{t+1})/sqrt(delta) - b_{t+1} h(u^t; y),
//   b_{t+1} = (1/n) sum f_next'
// Damping blends the new iterate with the old with weight `damping` on the new.
GampState gamp_step(const GampState& state, const Instance& instance, const DenoiserPair& den,
                    const ScalarDenoiser& f_next, double delta, double damping = 1.0,
                    const OnsagerOverride& override = {});

// Same update with deterministic memory coefficients from quadrature:
// c_t = E{h'(U_t;Y)}, b_{t+1} = E{f_next'(X_{t+1})}/delta.
GampState modified_gamp_step(const GampState& state, const Instance& instance, const Prior& prior,
                             const Channel& channel, const DenoiserPair& den, const ScalarDenoiser& f_next,
                             const SeState& se_cur, const SeState& se_next, double delta,
                             int order = kDefaultQuadOrder);

// deterministic memory coefficients on their own (for concentration checks);
// the U-side parameters are induced from the current X-state by f, since the
// state record carries the U parameters of the previous iteration
double deterministic_c(const SeState& se_cur, const Prior& prior, const Channel& channel, const DenoiserPair& den,
                       double delta, int order = kDefaultQuadOrder);
double deterministic_b(const SeState& se_next, const Prior& prior, const std::function<double(double)>& f_prime,
                       double delta, int order = kDefaultQuadOrder);

// Full run: the denoiser schedule is driven by the deterministic recursion,
// advanced alongside the iterates and frozen once it reaches its terminal
// (vanishing-variance) state. Stops when ||x^{t+1}-x^t||^2/d < stop_tol.
GampTrace gamp_run(const Instance& instance, const GampConfig& config, const SpectralEstimate& est,
                   const SpectralPrediction& pred, const Preprocessing& preproc, const Prior& prior,
                   const Channel& channel);

// (1/d) sum psi(x_i, y_i)
double empirical_pl2(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::function<double(double, double)>& psi);

// signed normalized correlation <a,b>/(||a|| ||b||)
double signed_overlap(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace glmamp

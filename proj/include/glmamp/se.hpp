#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "glmamp/models.hpp"
#include "glmamp/quadrature.hpp"

namespace glmamp {

// Parameters tracked by the deterministic recursion: the iterate laws are
// X_t = mu_X X + sig_X W and U_t = mu_U G + sig_U W'.
struct SeState {
  double mu_X = 0.0;
  double sig2_X = 0.0;
  double mu_U = 0.0;
  double sig2_U = 0.0;
  int t = 0;
};

struct DenoiserPair {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
  std::function<double(double, double)> h;        // h(u; y)
  std::function<double(double, double)> h_prime;  // d/du h(u; y)
};

struct SeTrace {
  std::vector<SeState> states;
  bool converged = false;
  bool perfect_recovery = false;
  std::optional<SeState> fixed_point;
};

// mu_X0 = a/sqrt(delta), sig2_X0 = (1-a^2)/delta
SeState se_init(double a2, double delta);

// One application of the recursion. Throws on sig2_X == 0 (perfect-recovery
// terminal state, handled by se_fixed_point).
SeState se_step(const SeState& state, const Prior& prior, const Channel& channel, const DenoiserPair& den,
                double delta, int order = kDefaultQuadOrder);

using DenoiserSupplier = std::function<DenoiserPair(const SeState&)>;

SeTrace se_fixed_point(const SeState& init, const Prior& prior, const Channel& channel,
                       const DenoiserSupplier& supplier, double delta, int max_iter = 500, double tol = 1e-10,
                       int order = kDefaultQuadOrder);

struct ScalarDenoiser {
  std::function<double(double)> f;
  std::function<double(double)> f_prime;
};

// f*(s) = E{X | mu X + sig W = s}; closed forms for the built-in priors
ScalarDenoiser bayes_f_star(const Prior& prior, double mu, double sig2);

struct OutputDenoiser {
  std::function<double(double, double)> h;
  std::function<double(double, double)> h_prime;
};

// h*(u; y) = (E{G | U=u, Y=y} - rho u)/(1 - rho mu_U); closed form for the
// exact noiseless channel, quadrature over the channel noise otherwise
OutputDenoiser bayes_h_star(const Channel& channel, double mu_U, double sig2_U, int order = kDefaultQuadOrder);

// identity input denoiser
ScalarDenoiser identity_denoiser();

// assemble a DenoiserPair with h = sqrt(delta) h* and f either identity or f*
DenoiserPair make_denoiser_pair(const Prior& prior, const Channel& channel, const SeState& state, double delta,
                                bool bayes_f, int order = kDefaultQuadOrder);

// summary statistics of the state under the estimate x_hat = f(X_t)
double overlap_from_se(const SeState& state, const Prior& prior, const std::function<double(double)>& f,
                       int order = kDefaultQuadOrder);
double mse_from_se(const SeState& state, const Prior& prior, const std::function<double(double)>& f,
                   int order = kDefaultQuadOrder);

// prior-side expectations E{X f(X_t)} and E{f(X_t)^2}
std::pair<double, double> prior_moments(const SeState& state, const Prior& prior,
                                        const std::function<double(double)>& f, int order = kDefaultQuadOrder);

// E{f(X_t)} for an arbitrary scalar function
double prior_expect(const SeState& state, const Prior& prior, const std::function<double(double)>& f,
                    int order = kDefaultQuadOrder);

// channel-side expectations E{G h}, E{h'}, E{h^2} over (U_t, Y)
struct ChannelMoments {
  double g_h = 0.0;
  double h_prime = 0.0;
  double h_sq = 0.0;
};
ChannelMoments channel_moments(const SeState& state, const Channel& channel, const DenoiserPair& den,
                               int order = kDefaultQuadOrder);

}  // namespace glmamp

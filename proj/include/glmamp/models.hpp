#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glmamp/linop.hpp"
#include "glmamp/quadrature.hpp"
#include "glmamp/rng.hpp"

namespace glmamp {

// Limiting empirical distribution of the signal entries. Second moment is 1
// by construction (the instance sampler rescales exactly).
struct Prior {
  enum class Kind { Gaussian, Binary, Custom };

  Kind kind = Kind::Gaussian;
  double p_plus = 0.5;  // Binary only: P(X = +1)
  std::function<double(Rng&)> sampler;
  // atoms (weight, value) for discrete priors; empty means standard normal
  std::vector<std::pair<double, double>> atoms;

  static Prior gaussian();
  static Prior binary(double p_plus);
};

// Output law p(y | g). Built-in channels are the phase-retrieval family:
//   NoiselessPr : y = g^2 exactly (point-mass density; no evaluator)
//   NoisyPr     : y = g^2 + sigma_w * w,  w ~ N(0,1)
//   SmoothedPr  : same law as NoisyPr with a small eps, used as the
//                 vanishing-perturbation stand-in for the exact channel
struct Channel {
  enum class Kind { NoiselessPr, NoisyPr, SmoothedPr, Custom };

  Kind kind = Kind::NoiselessPr;
  double sigma_w = 0.0;

  static Channel noiseless_pr();
  static Channel noisy_pr(double sigma_w);
  static Channel smoothed_pr(double eps);

  bool has_density() const { return kind != Kind::NoiselessPr; }

  double sample(double g, Rng& rng) const;

  // p(y | g); 0 outside the truncated domain
  double density(double y, double g) const;

  // truncated y-domain used for numerical integration over y
  std::pair<double, double> y_domain() const;

  // y = q(g, w) for a standard-normal noise node w; the exact channel
  // ignores w (single noise node)
  double q(double g, double w) const;
  int noise_order(int requested) const { return has_density() ? requested : 1; }

  // E_G{ p(y|G) f(G) } for f in {1, G, G^2}, G ~ N(0,1). Noisy channels
  // integrate directly over the signal with panels graded around the
  // likelihood ridges, so small sigma_w stays accurate. Returns {m0, m1, m2}.
  // The rule argument is kept for interface stability and ignored.
  std::array<double, 3> density_weighted_moments(double y, const QuadratureRule& noise_rule) const;

  // Moments of the unnormalized posterior of G with Gaussian reference
  // N(m, s2) and likelihood p(y|G): returns {S0, S1/S0, var}. Used by the
  // quadrature form of the Bayes denoiser h*.
  struct PosteriorMoments {
    double mass = 0.0;
    double mean = 0.0;
    double var = 0.0;
  };
  PosteriorMoments posterior_moments(double y, double m, double s2, const QuadratureRule& noise_rule) const;
};

// Complex output law used by the complex modules: y = |g|^2 with g ~ CN(0,1),
// so Y ~ Exp(1) marginally.
struct ComplexChannel {
  double sample(const std::complex<double>& g) const { return std::norm(g); }
  double marginal_density(double y) const { return y >= 0.0 ? std::exp(-y) : 0.0; }
};

// Bounded Lipschitz spectral preprocessing T_s with the support supremum tau
// of Z_s = T_s(Y).
struct Preprocessing {
  std::function<double(double)> map;
  double tau = 0.0;
  double lipschitz_bound = 0.0;
  std::string name;
};

struct Instance {
  std::vector<double> x;                       // ||x||^2 = d exactly
  std::shared_ptr<const RealOperator> op;      // n x d sensing operator
  std::vector<double> y;
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
};

// x ~ prior (rescaled to ||x||^2 = d), A dense i.i.d. N(0, 1/d),
// y_i = channel.sample(<a_i, x>).
Instance sample_instance(const Prior& prior, const Channel& channel, std::size_t d, double delta, Rng& rng);

// pointwise p(y|g) on a grid
std::vector<double> channel_density_grid(const Channel& channel, double g, const std::vector<double>& grid);

struct ComplexInstance {
  std::vector<std::complex<double>> x;
  std::shared_ptr<const ComplexOperator> op;
  std::vector<double> y;
  double delta = 0.0;
  std::size_t n = 0;
  std::size_t d = 0;
};

// x ~ CN(0,1) rescaled, A dense i.i.d. CN(0, 1/d), y = |Ax|^2
ComplexInstance sample_complex_instance(std::size_t d, double delta, Rng& rng);

}  // namespace glmamp

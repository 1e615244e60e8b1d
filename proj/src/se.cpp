#include "glmamp/se.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace glmamp {

namespace {

constexpr double kPerfectRecoveryMu = 1e8;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

const QuadratureRule& unit_gl() {
  static const QuadratureRule rule = gauss_legendre(12, 0.0, 1.0);
  return rule;
}

// standard-normal expectation of a vector-valued integrand with panels
// geometrically graded toward `center`: posterior-based integrands develop a
// thin transition layer there that sharpens with the state, so a fixed-order
// global rule cannot be accurate uniformly
template <std::size_t N, typename F>
std::array<double, N> layered_normal_expect(double center, F&& f) {
  constexpr double kHalf = 9.0;
  const QuadratureRule& gl = unit_gl();
  const double c = std::clamp(center, -kHalf, kHalf);
  std::array<double, N> acc{};
  auto panel = [&](double a, double b) {
    const double len = b - a;
    for (int j = 0; j < gl.order; ++j) {
      const double t = a + len * gl.nodes[j];
      const double w = len * gl.weights[j] * kInvSqrt2Pi * std::exp(-0.5 * t * t);
      const std::array<double, N> v = f(t);
      for (std::size_t i = 0; i < N; ++i) acc[i] += w * v[i];
    }
  };
  for (double dir : {1.0, -1.0}) {
    const double limit = dir > 0.0 ? kHalf : -kHalf;
    double prev = c;
    for (int k = 25; k >= 0; --k) {
      double edge = c + dir * 2.0 * kHalf * std::ldexp(1.0, -k);
      bool last = false;
      if ((edge - limit) * dir >= 0.0) {
        edge = limit;
        last = true;
      }
      if (dir > 0.0) {
        panel(prev, edge);
      } else {
        panel(edge, prev);
      }
      prev = edge;
      if (last) break;
    }
  }
  return acc;
}

// iterate over the atoms of the prior: (weight, x)
template <typename F>
void for_prior(const Prior& prior, const QuadratureRule& rule, F&& body) {
  if (prior.kind == Prior::Kind::Gaussian) {
    for (int i = 0; i < rule.order; ++i) body(rule.weights[i], rule.nodes[i]);
  } else if (!prior.atoms.empty()) {
    for (const auto& [w, x] : prior.atoms) body(w, x);
  } else {
    throw std::logic_error("prior expectations need atoms or a Gaussian kind");
  }
}

}  // namespace

SeState se_init(double a2, double delta) {
  if (!(a2 >= 0.0 && a2 <= 1.0)) throw std::invalid_argument("se_init: a2 must be in [0,1]");
  if (!(delta > 0.0)) throw std::invalid_argument("se_init: delta must be > 0");
  SeState s;
  s.mu_X = std::sqrt(a2) / std::sqrt(delta);
  s.sig2_X = (1.0 - a2) / delta;
  s.t = 0;
  return s;
}

std::pair<double, double> prior_moments(const SeState& state, const Prior& prior,
                                        const std::function<double(double)>& f, int order) {
  const QuadratureRule rule = gauss_hermite(order);
  const double sig = std::sqrt(state.sig2_X);
  double xf = 0.0, f2 = 0.0;
  for_prior(prior, rule, [&](double wx, double x) {
    for (int j = 0; j < rule.order; ++j) {
      const double v = f(state.mu_X * x + sig * rule.nodes[j]);
      const double w = wx * rule.weights[j];
      xf += w * x * v;
      f2 += w * v * v;
    }
  });
  return {xf, f2};
}

double prior_expect(const SeState& state, const Prior& prior, const std::function<double(double)>& f, int order) {
  const QuadratureRule rule = gauss_hermite(order);
  const double sig = std::sqrt(state.sig2_X);
  double acc = 0.0;
  for_prior(prior, rule, [&](double wx, double x) {
    for (int j = 0; j < rule.order; ++j) acc += wx * rule.weights[j] * f(state.mu_X * x + sig * rule.nodes[j]);
  });
  return acc;
}

ChannelMoments channel_moments(const SeState& state, const Channel& channel, const DenoiserPair& den, int order) {
  const QuadratureRule v_rule = gauss_hermite(channel.noise_order(order));
  const double sig_U = std::sqrt(state.sig2_U);

  // nested layered integration over (g, w); the layers sit at u = 0 (sign
  // ambiguity of the posterior), i.e. at g = 0 outside and w = -mu_U g/sig_U
  // inside; the noise dimension stays on a fixed rule because the density is
  // smooth in it
  auto moments_at = [&](double g, double u, double y) -> std::array<double, 3> {
    const double hv = den.h(u, y);
    return {g * hv, den.h_prime(u, y), hv * hv};
  };
  const std::array<double, 3> out = layered_normal_expect<3>(0.0, [&](double g) {
    double a0 = 0.0, a1 = 0.0, a2 = 0.0;
#pragma omp parallel for reduction(+ : a0, a1, a2) schedule(dynamic) if (v_rule.order > 8)
    for (int k = 0; k < v_rule.order; ++k) {
      const double y = channel.q(g, v_rule.nodes[k]);
      std::array<double, 3> inner;
      if (sig_U > 0.0) {
        inner = layered_normal_expect<3>(-state.mu_U * g / sig_U,
                                         [&](double w) { return moments_at(g, state.mu_U * g + sig_U * w, y); });
      } else {
        inner = moments_at(g, state.mu_U * g, y);
      }
      a0 += v_rule.weights[k] * inner[0];
      a1 += v_rule.weights[k] * inner[1];
      a2 += v_rule.weights[k] * inner[2];
    }
    return std::array<double, 3>{a0, a1, a2};
  });

  ChannelMoments m;
  m.g_h = out[0];
  m.h_prime = out[1];
  m.h_sq = out[2];
  return m;
}

SeState se_step(const SeState& state, const Prior& prior, const Channel& channel, const DenoiserPair& den,
                double delta, int order) {
  if (!(state.sig2_X > 0.0)) {
    throw std::runtime_error("se_step: sig2_X = 0 (perfect recovery; terminal state)");
  }
  const auto [xf, f2] = prior_moments(state, prior, den.f, order);

  SeState next;
  next.mu_U = xf / std::sqrt(delta);
  next.sig2_U = std::max(0.0, f2 / delta - next.mu_U * next.mu_U);

  SeState mid = state;
  mid.mu_U = next.mu_U;
  mid.sig2_U = next.sig2_U;
  const ChannelMoments cm = channel_moments(mid, channel, den, order);

  next.mu_X = std::sqrt(delta) * cm.g_h - cm.h_prime * xf;
  next.sig2_X = cm.h_sq;
  next.t = state.t + 1;
  return next;
}

SeTrace se_fixed_point(const SeState& init, const Prior& prior, const Channel& channel,
                       const DenoiserSupplier& supplier, double delta, int max_iter, double tol, int order) {
  SeTrace trace;
  SeState cur = init;
  trace.states.push_back(cur);
  for (int it = 0; it < max_iter; ++it) {
    if (cur.sig2_X <= 1e-14 * std::max(1.0, cur.mu_X * cur.mu_X) || cur.mu_X > kPerfectRecoveryMu) {
      trace.converged = true;
      trace.perfect_recovery = true;
      trace.fixed_point = cur;
      return trace;
    }
    const DenoiserPair den = supplier(cur);
    SeState next = se_step(cur, prior, channel, den, delta, order);
    trace.states.push_back(next);
    const double diff = std::max(std::max(std::abs(next.mu_X - cur.mu_X), std::abs(next.sig2_X - cur.sig2_X)),
                                 std::max(std::abs(next.mu_U - cur.mu_U), std::abs(next.sig2_U - cur.sig2_U)));
    cur = next;
    if (diff < tol) {
      trace.converged = true;
      trace.fixed_point = cur;
      return trace;
    }
  }
  trace.converged = false;
  return trace;
}

ScalarDenoiser identity_denoiser() {
  ScalarDenoiser d;
  d.f = [](double s) { return s; };
  d.f_prime = [](double) { return 1.0; };
  return d;
}

ScalarDenoiser bayes_f_star(const Prior& prior, double mu, double sig2) {
  if (!(sig2 > 0.0)) throw std::invalid_argument("bayes_f_star: sig2 must be > 0");
  ScalarDenoiser d;
  if (prior.kind == Prior::Kind::Gaussian) {
    const double c = mu / (mu * mu + sig2);
    d.f = [c](double s) { return c * s; };
    d.f_prime = [c](double) { return c; };
    return d;
  }
  if (prior.kind == Prior::Kind::Binary) {
    const double log_r = std::log((1.0 - prior.p_plus) / prior.p_plus);
    const double k = 2.0 * mu / sig2;
    d.f = [log_r, k](double s) {
      const double e = log_r - k * s;
      if (e > 700.0) return -1.0;
      if (e < -700.0) return 1.0;
      return 2.0 / (1.0 + std::exp(e)) - 1.0;
    };
    d.f_prime = [log_r, k](double s) {
      const double e = log_r - k * s;
      if (std::abs(e) > 700.0) return 0.0;
      const double L = std::exp(e);
      return 2.0 * k * L / ((1.0 + L) * (1.0 + L));
    };
    return d;
  }
  throw std::invalid_argument("bayes_f_star: no closed form for custom prior");
}

OutputDenoiser bayes_h_star(const Channel& channel, double mu_U, double sig2_U, int order) {
  if (!(mu_U * mu_U + sig2_U > 0.0)) throw std::invalid_argument("bayes_h_star: need mu_U^2 + sig2_U > 0");
  const double rho = mu_U / (mu_U * mu_U + sig2_U);
  // algebraic form of 1 - rho*mu_U; the direct difference cancels to zero
  // when sig2_U is many orders below mu_U^2
  const double s2 = sig2_U / (mu_U * mu_U + sig2_U);
  if (!(s2 > 0.0)) throw std::runtime_error("bayes_h_star: residual variance underflow");
  const QuadratureRule noise = gauss_hermite(channel.noise_order(order));

  OutputDenoiser d;
  d.h = [channel, rho, s2, noise](double u, double y) {
    const auto pm = channel.posterior_moments(y, rho * u, s2, noise);
    return (pm.mean - rho * u) / s2;
  };
  d.h_prime = [channel, rho, s2, noise](double u, double y) {
    const auto pm = channel.posterior_moments(y, rho * u, s2, noise);
    return rho * (pm.var / s2 - 1.0) / s2;
  };
  return d;
}

DenoiserPair make_denoiser_pair(const Prior& prior, const Channel& channel, const SeState& state, double delta,
                                bool bayes_f, int order) {
  DenoiserPair pair;
  const double sig2_f = std::max(state.sig2_X, 1e-12 * std::max(state.mu_X * state.mu_X, 1e-300));
  const ScalarDenoiser fd = bayes_f ? bayes_f_star(prior, state.mu_X, sig2_f) : identity_denoiser();
  pair.f = fd.f;
  pair.f_prime = fd.f_prime;

  // U-side parameters induced by this f at the current state
  const auto [xf, f2] = prior_moments(state, prior, fd.f, order);
  const double mu_U = xf / std::sqrt(delta);
  // relative floor: near the vanishing-variance terminal the raw difference
  // underflows and the induced output denoiser would degenerate
  const double sig2_U = std::max(1e-12 * std::max(mu_U * mu_U, 1e-300), f2 / delta - mu_U * mu_U);
  const OutputDenoiser hd = bayes_h_star(channel, mu_U, sig2_U, order);
  const double sq = std::sqrt(delta);
  pair.h = [h = hd.h, sq](double u, double y) { return sq * h(u, y); };
  pair.h_prime = [hp = hd.h_prime, sq](double u, double y) { return sq * hp(u, y); };
  return pair;
}

double overlap_from_se(const SeState& state, const Prior& prior, const std::function<double(double)>& f, int order) {
  const auto [xf, f2] = prior_moments(state, prior, f, order);
  if (!(f2 > 0.0)) throw std::runtime_error("overlap_from_se: E{f^2} = 0 (undefined overlap)");
  return std::abs(xf) / std::sqrt(f2);
}

double mse_from_se(const SeState& state, const Prior& prior, const std::function<double(double)>& f, int order) {
  const QuadratureRule rule = gauss_hermite(order);
  const double sig = std::sqrt(state.sig2_X);
  double acc = 0.0;
  for_prior(prior, rule, [&](double wx, double x) {
    for (int j = 0; j < rule.order; ++j) {
      const double e = x - f(state.mu_X * x + sig * rule.nodes[j]);
      acc += wx * rule.weights[j] * e * e;
    }
  });
  return acc;
}

}  // namespace glmamp

#include "glmamp/artificial.hpp"

#include <cmath>
#include <stdexcept>

#include "glmamp/kernels.hpp"

namespace glmamp {

GampState artificial_init(const Instance& instance, double alpha, Rng& rng) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("artificial_init: alpha must be in (0,1)");
  const std::size_t d = instance.d;
  GampState st;
  st.t = 0;
  st.x_t.resize(d);
  const double noise = std::sqrt(1.0 - alpha * alpha);
  for (std::size_t i = 0; i < d; ++i) st.x_t[i] = alpha * instance.x[i] + noise * rng.next_normal();

  const double beta0 = std::sqrt(kernels::norm2_sq<double>(st.x_t) / static_cast<double>(d));
  std::vector<double> fx(d);
  for (std::size_t i = 0; i < d; ++i) fx[i] = st.x_t[i] / beta0;
  std::vector<double> afx = instance.op->apply(fx);
  const double sq = std::sqrt(instance.delta);
  st.u_t.resize(instance.n);
  for (std::size_t i = 0; i < instance.n; ++i) st.u_t[i] = afx[i] / sq;
  return st;
}

DenoiserPair phase1_functions(double beta_t, double lambda_star, const Preprocessing& preproc, double delta) {
  if (!(beta_t > 0.0)) throw std::invalid_argument("phase1_functions: beta_t must be > 0");
  if (!(lambda_star > preproc.tau)) throw std::invalid_argument("phase1_functions: lambda_star must exceed tau");
  const double inv_beta = 1.0 / beta_t;
  const double sq = std::sqrt(delta);
  const auto map = preproc.map;
  auto ratio = [map, lambda_star, sq](double y) {
    const double z = map(y);
    const double den = lambda_star - z;
    if (!(den > 0.0)) throw std::domain_error("phase1_functions: preprocessed value reaches lambda_star");
    return sq * z / den;
  };
  DenoiserPair den;
  den.f = [inv_beta](double x) { return inv_beta * x; };
  den.f_prime = [inv_beta](double) { return inv_beta; };
  den.h = [ratio](double u, double y) { return u * ratio(y); };
  den.h_prime = [ratio](double, double y) { return ratio(y); };
  return den;
}

Phase1Se phase1_se(const ZsLaw& law, double lambda_star, double delta, double alpha, int T) {
  const double m2 = law.expect([&](double z, double) {
    const double r = z / (lambda_star - z);
    return r * r;
  });
  const double m2g = law.expect([&](double z, double gsq) {
    const double r = z / (lambda_star - z);
    return r * r * gsq;
  });
  const double sq = std::sqrt(delta);

  Phase1Se out;
  SeState s;
  s.mu_X = alpha;
  s.sig2_X = 1.0 - alpha * alpha;
  s.t = 0;
  double beta = 1.0;
  out.states.push_back(s);
  out.betas.push_back(beta);
  for (int t = 0; t < T; ++t) {
    SeState next;
    next.mu_U = s.mu_X / (sq * beta);
    next.sig2_U = s.sig2_X / (delta * beta * beta);
    next.mu_X = s.mu_X / (sq * beta);
    next.sig2_X = (s.mu_X * s.mu_X * m2g + s.sig2_X * m2) / (beta * beta);
    next.t = t + 1;
    beta = std::sqrt(next.mu_X * next.mu_X + next.sig2_X);
    s = next;
    out.states.push_back(s);
    out.betas.push_back(beta);
  }
  return out;
}

ArtificialResult artificial_run(const Instance& instance, const ArtificialConfig& config,
                                const SpectralEstimate& est, const SpectralPrediction& pred,
                                const Preprocessing& preproc, const Prior& prior, const Channel& channel,
                                const ZsLaw& law, Rng& rng) {
  const double delta = instance.delta;
  const double dd = static_cast<double>(instance.d);

  ArtificialResult res;
  Phase1Se se1 = phase1_se(law, pred.lambda_star, delta, config.alpha, config.T);
  res.phase1_se = se1.states;
  res.betas = se1.betas;

  // phase-2 schedule starts from the phase-1 terminal parameters
  std::vector<SeState> se2{se1.states.back()};
  std::vector<DenoiserPair> dens2;
  auto ensure2 = [&](std::size_t t) {
    while (dens2.size() <= t) {
      const std::size_t k = dens2.size();
      if (k >= se2.size()) se2.push_back(se2.back());
      dens2.push_back(config.true_denoisers(se2[k]));
      if (se2.size() == k + 1) {
        const SeState& cur = se2[k];
        if (cur.sig2_X <= 0.0 || cur.sig2_X < 1e-10 * cur.mu_X * cur.mu_X || cur.mu_X > 1e8) {
          se2.push_back(cur);
        } else {
          se2.push_back(se_step(cur, prior, channel, dens2[k], delta, config.order));
        }
      }
    }
  };
  ensure2(0);

  GampState state = artificial_init(instance, config.alpha, rng);
  res.overlaps.push_back(signed_overlap(instance.x, state.x_t));

  // The linear phase is scale-marginal: with the deterministic beta_t schedule
  // any realization-dependent gain error compounds over the T steps, so the
  // iterate is normalized with the measured norm instead. The pair (f, h) is
  // linear, hence this changes the trajectory only by a per-step scalar and
  // the direction is identical to the deterministic-beta run.
  const std::size_t n = instance.n;
  const double sq = std::sqrt(delta);
  std::vector<double> ratio(n);
  double c_t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = preproc.map(instance.y[i]);
    const double den = pred.lambda_star - z;
    if (!(den > 0.0)) throw std::domain_error("artificial_run: preprocessed value reaches lambda_star");
    ratio[i] = sq * z / den;
    c_t += ratio[i];
  }
  c_t /= static_cast<double>(n);

  for (int t = 0; t < config.T; ++t) {
    const double beta_t = std::sqrt(kernels::norm2_sq<double>(state.x_t) / dd);
    std::vector<double> hv(n);
    for (std::size_t i = 0; i < n; ++i) hv[i] = state.u_t[i] * ratio[i];

    std::vector<double> ath = instance.op->apply_adjoint(hv);
    GampState next;
    next.t = state.t + 1;
    next.c_t = c_t;
    next.x_t.resize(instance.d);
    for (std::size_t i = 0; i < instance.d; ++i) next.x_t[i] = ath[i] / sq - c_t * state.x_t[i] / beta_t;

    std::vector<double> fx(instance.d);
    double b_next = 0.0;
    if (t + 1 < config.T) {
      const double beta_next = std::sqrt(kernels::norm2_sq<double>(next.x_t) / dd);
      for (std::size_t i = 0; i < instance.d; ++i) fx[i] = next.x_t[i] / beta_next;
      b_next = dd / (static_cast<double>(n) * beta_next);
    } else {
      for (std::size_t i = 0; i < instance.d; ++i) {
        fx[i] = dens2[0].f(next.x_t[i]);
        b_next += dens2[0].f_prime(next.x_t[i]);
      }
      b_next /= static_cast<double>(n);
    }
    next.b_t = b_next;
    std::vector<double> afx = instance.op->apply(fx);
    next.u_t.resize(n);
    for (std::size_t i = 0; i < n; ++i) next.u_t[i] = afx[i] / sq - b_next * hv[i];

    double diff = 0.0;
    for (std::size_t i = 0; i < instance.d; ++i) {
      const double e = next.x_t[i] - state.x_t[i];
      diff += e * e;
    }
    res.diffs.push_back(diff / dd);
    state = std::move(next);
    res.overlaps.push_back(signed_overlap(instance.x, state.x_t));
  }
  res.at_T = state;

  const double sqd = std::sqrt(dd);
  const double sqdelta = std::sqrt(delta);
  const double sign = signed_overlap(est.xs, state.x_t) >= 0.0 ? 1.0 : -1.0;
  double gap = 0.0;
  for (std::size_t i = 0; i < instance.d; ++i) {
    const double e = sqd * sign * est.xs[i] - sqdelta * state.x_t[i];
    gap += e * e;
  }
  res.gap = gap / dd;

  for (int t = 0; t < config.phase2_iters; ++t) {
    ensure2(t + 1);
    ScalarDenoiser f_next{dens2[t + 1].f, dens2[t + 1].f_prime};
    GampState next = gamp_step(state, instance, dens2[t], f_next, delta);
    double diff = 0.0;
    for (std::size_t i = 0; i < instance.d; ++i) {
      const double e = next.x_t[i] - state.x_t[i];
      diff += e * e;
    }
    res.diffs.push_back(diff / dd);
    state = std::move(next);
    res.overlaps.push_back(signed_overlap(instance.x, state.x_t));
    res.phase2_x.push_back(state.x_t);
  }
  res.final = std::move(state);
  return res;
}

}  // namespace glmamp

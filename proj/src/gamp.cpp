#include "glmamp/gamp.hpp"

#include <cmath>
#include <stdexcept>

#include "glmamp/kernels.hpp"

namespace glmamp {

namespace {

void check_finite(const std::vector<double>& v, int t, const char* label) {
  for (double x : v) {
    if (!std::isfinite(x)) throw GampDivergence(t, std::string("non-finite entry in ") + label);
  }
}

std::vector<double> apply_scalar(const std::vector<double>& v, const std::function<double(double)>& f) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = f(v[i]);
  return out;
}

void blend(std::vector<double>& next, const std::vector<double>& prev, double damping) {
  if (damping == 1.0) return;
  for (std::size_t i = 0; i < next.size(); ++i) next[i] = damping * next[i] + (1.0 - damping) * prev[i];
}

// freeze the schedule once the deterministic recursion is effectively at its
// vanishing-variance terminal point
bool se_terminal(const SeState& s) {
  return s.sig2_X <= 0.0 || s.sig2_X < 1e-10 * s.mu_X * s.mu_X || s.mu_X > 1e8;
}

}  // namespace

double signed_overlap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("signed_overlap: length mismatch");
  const double na = std::sqrt(kernels::norm2_sq<double>(a));
  const double nb = std::sqrt(kernels::norm2_sq<double>(b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return kernels::dot(a, b) / (na * nb);
}

double empirical_pl2(const std::vector<double>& xs, const std::vector<double>& ys,
                     const std::function<double(double, double)>& psi) {
  if (xs.size() != ys.size()) throw std::invalid_argument("empirical_pl2: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += psi(xs[i], ys[i]);
  return acc / static_cast<double>(xs.size());
}

GampState gamp_init_spectral(const Instance& instance, const SpectralEstimate& est, const SpectralPrediction& pred,
                             const Preprocessing& preproc, const ScalarDenoiser& f0,
                             std::optional<double> b0_override) {
  if (!(pred.lambda_star > preproc.tau)) {
    throw std::invalid_argument("gamp_init_spectral: spectral location does not exceed the preprocessing supremum");
  }
  const std::size_t d = instance.d;
  const std::size_t n = instance.n;
  const double sq = std::sqrt(instance.delta);

  GampState st;
  st.t = 0;
  st.x_t.resize(d);
  const double scale = std::sqrt(static_cast<double>(d)) / sq;
  for (std::size_t i = 0; i < d; ++i) st.x_t[i] = scale * est.xs[i];

  double b0 = 0.0;
  if (b0_override) {
    b0 = *b0_override;
  } else {
    for (std::size_t i = 0; i < d; ++i) b0 += f0.f_prime(st.x_t[i]);
    b0 /= static_cast<double>(n);
  }
  st.b_t = b0;
  st.c_t = 0.0;

  std::vector<double> ax = instance.op->apply(st.x_t);
  std::vector<double> afx = instance.op->apply(apply_scalar(st.x_t, f0.f));
  st.u_t.resize(n);
  const double k = b0 * sq / pred.lambda_star;
  for (std::size_t i = 0; i < n; ++i) {
    st.u_t[i] = afx[i] / sq - k * preproc.map(instance.y[i]) * ax[i];
  }
  check_finite(st.x_t, 0, "x^0");
  check_finite(st.u_t, 0, "u^0");
  return st;
}

GampState gamp_step(const GampState& state, const Instance& instance, const DenoiserPair& den,
                    const ScalarDenoiser& f_next, double delta, double damping,
                    const OnsagerOverride& override) {
  const std::size_t d = instance.d;
  const std::size_t n = instance.n;
  const double sq = std::sqrt(delta);

  std::vector<double> hv(n);
  double c_t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    hv[i] = den.h(state.u_t[i], instance.y[i]);
    c_t += den.h_prime(state.u_t[i], instance.y[i]);
  }
  c_t /= static_cast<double>(n);
  if (override.c_t) c_t = *override.c_t;

  std::vector<double> ath = instance.op->apply_adjoint(hv);
  GampState next;
  next.t = state.t + 1;
  next.c_t = c_t;
  next.x_t.resize(d);
  for (std::size_t i = 0; i < d; ++i) next.x_t[i] = ath[i] / sq - c_t * den.f(state.x_t[i]);
  blend(next.x_t, state.x_t, damping);
  check_finite(next.x_t, next.t, "x");

  double b_next = 0.0;
  if (override.b_next) {
    b_next = *override.b_next;
  } else {
    for (std::size_t i = 0; i < d; ++i) b_next += f_next.f_prime(next.x_t[i]);
    b_next /= static_cast<double>(n);
  }
  next.b_t = b_next;

  std::vector<double> af = instance.op->apply(apply_scalar(next.x_t, f_next.f));
  next.u_t.resize(n);
  for (std::size_t i = 0; i < n; ++i) next.u_t[i] = af[i] / sq - b_next * hv[i];
  blend(next.u_t, state.u_t, damping);
  check_finite(next.u_t, next.t, "u");
  return next;
}

double deterministic_c(const SeState& se_cur, const Prior& prior, const Channel& channel, const DenoiserPair& den,
                       double delta, int order) {
  const auto [xf, f2] = prior_moments(se_cur, prior, den.f, order);
  SeState mid = se_cur;
  mid.mu_U = xf / std::sqrt(delta);
  mid.sig2_U = std::max(1e-12 * std::max(mid.mu_U * mid.mu_U, 1e-300), f2 / delta - mid.mu_U * mid.mu_U);
  return channel_moments(mid, channel, den, order).h_prime;
}

double deterministic_b(const SeState& se_next, const Prior& prior, const std::function<double(double)>& f_prime,
                       double delta, int order) {
  return prior_expect(se_next, prior, f_prime, order) / delta;
}

GampState modified_gamp_step(const GampState& state, const Instance& instance, const Prior& prior,
                             const Channel& channel, const DenoiserPair& den, const ScalarDenoiser& f_next,
                             const SeState& se_cur, const SeState& se_next, double delta, int order) {
  OnsagerOverride o;
  o.c_t = deterministic_c(se_cur, prior, channel, den, delta, order);
  o.b_next = deterministic_b(se_next, prior, f_next.f_prime, delta, order);
  return gamp_step(state, instance, den, f_next, delta, 1.0, o);
}

GampTrace gamp_run(const Instance& instance, const GampConfig& config, const SpectralEstimate& est,
                   const SpectralPrediction& pred, const Preprocessing& preproc, const Prior& prior,
                   const Channel& channel) {
  if (!(config.damping > 0.0 && config.damping <= 1.0)) throw std::invalid_argument("gamp_run: damping not in (0,1]");
  if (!(config.stop_tol > 0.0)) throw std::invalid_argument("gamp_run: stop_tol must be > 0");
  const double delta = instance.delta;
  const double dd = static_cast<double>(instance.d);

  // deterministic schedule, advanced lazily and frozen at the terminal state
  std::vector<SeState> se_states{se_init(pred.a2, delta)};
  std::vector<DenoiserPair> dens;
  auto ensure = [&](std::size_t t) {
    while (dens.size() <= t) {
      const std::size_t k = dens.size();
      if (k >= se_states.size()) se_states.push_back(se_states.back());
      // a terminal state gives a degenerate denoiser; keep the last healthy
      // one (the run stops before it is applied anyway)
      if (k > 0 && se_terminal(se_states[k])) {
        dens.push_back(dens[k - 1]);
      } else {
        dens.push_back(config.denoisers(se_states[k]));
      }
      if (se_states.size() == k + 1) {
        if (se_terminal(se_states[k])) {
          se_states.push_back(se_states[k]);
        } else {
          se_states.push_back(se_step(se_states[k], prior, channel, dens[k], delta, config.order));
        }
      }
    }
  };

  GampTrace trace;
  ensure(0);
  ScalarDenoiser f0{dens[0].f, dens[0].f_prime};
  std::optional<double> b0;
  if (config.onsager_mode == OnsagerMode::Deterministic) {
    b0 = deterministic_b(se_states[0], prior, dens[0].f_prime, delta, config.order);
  }

  GampState state;
  try {
    state = gamp_init_spectral(instance, est, pred, preproc, f0, b0);
    trace.overlaps.push_back(signed_overlap(instance.x, state.x_t));
    for (int t = 0; t < config.max_iter; ++t) {
      ensure(t + 1);
      // once the schedule is at its vanishing-variance terminal point the
      // denoisers degenerate and further steps only amplify finite-size
      // noise; the iterate is as good as it will get
      if (se_terminal(se_states[static_cast<std::size_t>(t)])) {
        trace.converged = true;
        break;
      }
      ScalarDenoiser f_next{dens[t + 1].f, dens[t + 1].f_prime};
      GampState next;
      if (config.onsager_mode == OnsagerMode::Deterministic) {
        next = modified_gamp_step(state, instance, prior, channel, dens[t], f_next, se_states[t], se_states[t + 1],
                                  delta, config.order);
        blend(next.x_t, state.x_t, config.damping);
        blend(next.u_t, state.u_t, config.damping);
      } else {
        next = gamp_step(state, instance, dens[t], f_next, delta, config.damping);
      }
      double diff = 0.0;
      for (std::size_t i = 0; i < instance.d; ++i) {
        const double e = next.x_t[i] - state.x_t[i];
        diff += e * e;
      }
      diff /= dd;
      state = std::move(next);
      trace.overlaps.push_back(signed_overlap(instance.x, state.x_t));
      trace.diffs.push_back(diff);
      if (diff < config.stop_tol) {
        trace.converged = true;
        break;
      }
    }
  } catch (const GampDivergence&) {
    trace.converged = false;
    trace.final = std::move(state);
    return trace;
  }
  trace.final = std::move(state);
  return trace;
}

}  // namespace glmamp

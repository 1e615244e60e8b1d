#include "glmamp/cgamp.hpp"

#include <cmath>
#include <stdexcept>

namespace glmamp {

double bessel_i1_i0(double x) {
  if (x < 0.0) throw std::invalid_argument("bessel_i1_i0: argument must be >= 0");
  if (x < 1e-8) return 0.5 * x;
  // direct ratio below the switch; five-term asymptotic series above, where
  // the library Bessel functions start losing accuracy
  if (x <= 200.0) return std::cyl_bessel_i(1.0, x) / std::cyl_bessel_i(0.0, x);
  const double u = 1.0 / x;
  return 1.0 - 0.5 * u - 0.125 * u * u - 0.125 * u * u * u - (25.0 / 128.0) * u * u * u * u;
}

double phase_aligned_overlap(const std::vector<std::complex<double>>& xhat,
                             const std::vector<std::complex<double>>& x) {
  if (xhat.size() != x.size()) throw std::invalid_argument("phase_aligned_overlap: length mismatch");
  std::complex<double> ip(0.0, 0.0);
  double nh = 0.0, nx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ip += std::conj(xhat[i]) * x[i];
    nh += std::norm(xhat[i]);
    nx += std::norm(x[i]);
  }
  if (nh == 0.0 || nx == 0.0) throw std::invalid_argument("phase_aligned_overlap: zero vector");
  return std::norm(ip) / (nh * nx);
}

ComplexDenoiser complex_h_star(double mu_U, double sig2_U) {
  if (!(mu_U * mu_U + sig2_U > 0.0)) throw std::invalid_argument("complex_h_star: need mu_U^2 + sig2_U > 0");
  ComplexDenoiser d;
  d.rho = mu_U / (mu_U * mu_U + sig2_U);
  d.s2 = 1.0 - d.rho * mu_U;
  if (!(d.s2 > 0.0)) throw std::runtime_error("complex_h_star: 1 - rho*mu_U <= 0");
  const double rho = d.rho, s2 = d.s2;
  d.post_mean = [rho, s2](std::complex<double> u, double y) -> std::complex<double> {
    const double au = std::abs(u);
    if (au == 0.0 || y <= 0.0) return {0.0, 0.0};
    const double r = bessel_i1_i0(2.0 * std::sqrt(y) * rho * au / s2);
    return (u / au) * (std::sqrt(y) * r);
  };
  d.post_var = [rho, s2](std::complex<double> u, double y) {
    const double au = std::abs(u);
    if (au == 0.0 || y <= 0.0) return std::max(y, 0.0);
    const double r = bessel_i1_i0(2.0 * std::sqrt(y) * rho * au / s2);
    return y * (1.0 - r * r);
  };
  d.h = [d](std::complex<double> u, double y) { return (d.post_mean(u, y) - d.rho * u) / d.s2; };
  return d;
}

double complex_se_step(double mu, double delta, int order) {
  if (!(mu >= 0.0)) throw std::invalid_argument("complex_se_step: mu must be >= 0");
  const double sq = std::sqrt(delta);
  const double mu_U = mu / sq;
  const double sig2_U = mu / delta;
  const double rho = sq / (mu + 1.0);
  const double s2 = 1.0 / (mu + 1.0);
  const double sig_c = std::sqrt(sig2_U / 2.0);  // per-component noise std

  const QuadratureRule yr = gauss_laguerre(order);
  const QuadratureRule wr = gauss_hermite(order);

  double acc = 0.0;
  for (int iy = 0; iy < yr.order; ++iy) {
    const double y = yr.nodes[iy];
    const double sy = std::sqrt(y);
    for (int ir = 0; ir < wr.order; ++ir) {
      const double ur = mu_U * sy + sig_c * wr.nodes[ir];
      const double wy = yr.weights[iy] * wr.weights[ir];
      for (int ii = 0; ii < wr.order; ++ii) {
        const double ui = sig_c * wr.nodes[ii];
        const double au = std::sqrt(ur * ur + ui * ui);
        const double r = au > 0.0 ? bessel_i1_i0(2.0 * sy * rho * au / s2) : 0.0;
        const double hmag = (sy * r - rho * au) / s2;
        acc += wy * wr.weights[ii] * hmag * hmag;
      }
    }
  }
  // the iteration applies sqrt(delta) h, so the next state parameter is
  // E{|sqrt(delta) h|^2} = delta E{|h|^2}
  return delta * acc;
}

std::vector<double> complex_se_trace(double mu0, double delta, int T, int order) {
  std::vector<double> mus{mu0};
  double mu = mu0;
  for (int t = 0; t < T; ++t) {
    if (mu > 1e8) {
      mus.push_back(mu);
      continue;
    }
    mu = complex_se_step(mu, delta, order);
    mus.push_back(mu);
  }
  return mus;
}

double mu_from_norm(double v) {
  if (!(v >= 0.0)) throw std::invalid_argument("mu_from_norm: v must be >= 0");
  return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * v));
}

ComplexGampTrace complex_gamp_run(const ComplexInstance& instance, const ComplexGampConfig& config,
                                  const std::vector<std::complex<double>>& xhat_spectral, double a2,
                                  double lambda_star, const Preprocessing& preproc) {
  const std::size_t d = instance.d;
  const std::size_t n = instance.n;
  const double delta = instance.delta;
  const double sq = std::sqrt(delta);
  const double dd = static_cast<double>(d);

  double mu = config.mu0;
  double scale = config.x0_scale;
  if (mu < 0.0 || scale < 0.0) {
    if (!(a2 > 0.0 && a2 < 1.0)) {
      throw std::invalid_argument("complex_gamp_run: a2 outside (0,1) and no explicit mu0/x0_scale given");
    }
    const double a = std::sqrt(a2);
    if (mu < 0.0) mu = a2 / (1.0 - a2);
    if (scale < 0.0) scale = std::sqrt(dd) * a / (1.0 - a2);
  }

  ComplexGampTrace trace;
  std::vector<std::complex<double>> x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = scale * xhat_spectral[i];

  std::vector<std::complex<double>> ax = instance.op->apply(x);
  std::vector<std::complex<double>> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = (1.0 - preproc.map(instance.y[i]) / lambda_star) * ax[i] / sq;
  }
  trace.overlaps.push_back(phase_aligned_overlap(x, instance.x));
  trace.mus.push_back(mu);

  std::vector<std::complex<double>> hv(n);
  for (int t = 0; t < config.max_iter; ++t) {
    // at the vanishing-variance terminal point the posterior degenerates and
    // further steps only amplify finite-size noise; stop on the last healthy
    // iterate
    if (mu >= 1e8) {
      trace.converged = true;
      break;
    }
    const ComplexDenoiser den = complex_h_star(mu / sq, mu / delta);
    double var_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      hv[i] = den.h(u[i], instance.y[i]);
      var_sum += den.post_var(u[i], instance.y[i]);
    }
    // memory coefficient: sqrt(delta) times the mean Wirtinger divergence of
    // h, which is rho/s2 (mean var/s2 - 1) per sample with rho/s2 = sqrt(delta)
    const double c_t = delta * (var_sum / (static_cast<double>(n) * den.s2) - 1.0);

    std::vector<std::complex<double>> ath = instance.op->apply_adjoint(hv);
    double diff = 0.0;
    double x_norm = 0.0;
    std::vector<std::complex<double>> x_new(d);
    for (std::size_t i = 0; i < d; ++i) {
      x_new[i] = ath[i] - c_t * x[i];
      if (config.damping != 1.0) x_new[i] = config.damping * x_new[i] + (1.0 - config.damping) * x[i];
      diff += std::norm(x_new[i] - x[i]);
      x_norm += std::norm(x_new[i]);
      if (!std::isfinite(x_new[i].real()) || !std::isfinite(x_new[i].imag())) {
        trace.converged = false;
        trace.final_x = std::move(x);
        return trace;
      }
    }
    diff /= dd;

    std::vector<std::complex<double>> ax_new = instance.op->apply(x_new);
    for (std::size_t i = 0; i < n; ++i) u[i] = (ax_new[i] - hv[i]) / sq;
    x = std::move(x_new);

    if (config.online_mu) {
      // read the parameter off the measured iterate norm (mu^2 + mu =
      // ||x||^2/d for this state family); unlike a residual-based estimate
      // this cannot run away from the actual state
      mu = std::min(mu_from_norm(x_norm / dd), 1e8);
    } else {
      mu = complex_se_step(mu, delta, config.order);
    }
    trace.mus.push_back(mu);
    trace.overlaps.push_back(phase_aligned_overlap(x, instance.x));
    trace.diffs.push_back(diff);
    if (diff < config.stop_tol) {
      trace.converged = true;
      break;
    }
  }
  trace.final_x = std::move(x);
  return trace;
}

}  // namespace glmamp

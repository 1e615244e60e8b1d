#include "glmamp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glmamp {

namespace {

constexpr double kTauSlack = 1e-9;

double law_tau(const std::vector<ZsLaw::Sample>& samples) {
  double m = -1e300;
  for (const auto& s : samples) m = std::max(m, s.z);
  return m + kTauSlack * std::max(1.0, std::abs(m));
}

}  // namespace

ZsLaw make_zs_law(const Channel& channel, const Preprocessing& preproc, int order) {
  const QuadratureRule g_rule = gauss_hermite(order);
  const QuadratureRule w_rule = gauss_hermite(channel.noise_order(order));
  ZsLaw law;
  law.samples.reserve(static_cast<std::size_t>(g_rule.order) * w_rule.order);
  for (int i = 0; i < g_rule.order; ++i) {
    const double g = g_rule.nodes[i];
    for (int j = 0; j < w_rule.order; ++j) {
      const double y = channel.q(g, w_rule.nodes[j]);
      law.samples.push_back({g_rule.weights[i] * w_rule.weights[j], preproc.map(y), g * g});
    }
  }
  law.tau = law_tau(law.samples);
  return law;
}

ZsLaw make_zs_law_complex(const Preprocessing& preproc, int order) {
  // |G|^2 ~ Exp(1) for G ~ CN(0,1); the noiseless complex channel gives y = |G|^2
  const QuadratureRule rule = gauss_laguerre(order);
  ZsLaw law;
  law.samples.reserve(rule.order);
  for (int i = 0; i < rule.order; ++i) {
    const double y = rule.nodes[i];
    law.samples.push_back({rule.weights[i], preproc.map(y), y});
  }
  law.tau = law_tau(law.samples);
  return law;
}

double phi(double lambda, const ZsLaw& law) {
  if (!(lambda > law.tau)) throw std::domain_error("phi: lambda must exceed tau");
  return lambda * law.expect([lambda](double z, double gsq) { return z * gsq / (lambda - z); });
}

double psi_delta(double lambda, double delta, const ZsLaw& law) {
  if (!(lambda > law.tau)) throw std::domain_error("psi_delta: lambda must exceed tau");
  return lambda / delta + lambda * law.expect([lambda](double z, double) { return z / (lambda - z); });
}

double phi_prime(double lambda, const ZsLaw& law) {
  return -law.expect([lambda](double z, double gsq) { return z * z * gsq / ((lambda - z) * (lambda - z)); });
}

double psi_delta_prime(double lambda, double delta, const ZsLaw& law) {
  return 1.0 / delta - law.expect([lambda](double z, double) { return z * z / ((lambda - z) * (lambda - z)); });
}

double predict_overlap_a2(double lambda_star, const ZsLaw& law, double delta) {
  const double num =
      1.0 / delta - law.expect([lambda_star](double z, double) { return z * z / ((lambda_star - z) * (lambda_star - z)); });
  const double den = 1.0 / delta + law.expect([lambda_star](double z, double gsq) {
                       return z * z * (gsq - 1.0) / ((lambda_star - z) * (lambda_star - z));
                     });
  if (!(den > 0.0)) throw std::runtime_error("predict_overlap_a2: nonpositive denominator (assumption failure)");
  return std::clamp(num / den, 0.0, 1.0);
}

SpectralPrediction solve_lambda_star(const ZsLaw& law, double delta) {
  const double tau = law.tau;
  const double eps = 1e-9 * std::max(1.0, std::abs(tau));

  // psi_delta blows up at tau+ and grows like lambda/delta, so the minimizer
  // is interior; widen the cap if the minimizer lands on it.
  double cap = 1e3;
  double lambda_bar = 0.0;
  for (;;) {
    lambda_bar = minimize_convex([&](double l) { return psi_delta(l, delta, law); }, tau + eps, tau + cap, 1e-10);
    if (lambda_bar < tau + 0.999 * cap) break;
    cap *= 10.0;
    if (cap > 1e6) throw std::runtime_error("solve_lambda_star: psi_delta minimizer escaped the widened cap");
  }

  auto zeta_minus_phi = [&](double l) { return psi_delta(std::max(l, lambda_bar), delta, law) - phi(l, law); };

  double lo = tau + eps;
  if (zeta_minus_phi(lo) >= 0.0) {
    // the fixed-point curve never dips below phi near the bulk edge, so the
    // spike sticks to the edge: uninformative
    SpectralPrediction pred;
    pred.lambda_star = lambda_bar;
    pred.lambda_bar = lambda_bar;
    pred.informative = false;
    pred.a2 = 0.0;
    return pred;
  }
  double hi = std::max(lambda_bar, tau + 1.0);
  while (zeta_minus_phi(hi) < 0.0) {
    hi = tau + 2.0 * (hi - tau);
    if (hi - tau > 1e12) throw std::runtime_error("solve_lambda_star: no crossing found below the search cap");
  }
  const double lambda_star = find_root_monotone(zeta_minus_phi, lo, hi, 1e-10);

  SpectralPrediction pred;
  pred.lambda_star = lambda_star;
  pred.lambda_bar = lambda_bar;
  const double h = 1e-5 * std::max(1.0, lambda_star);
  const double lm = std::max(lambda_star - h, tau + eps);
  pred.psi_prime_at_star = (psi_delta(lambda_star + h, delta, law) - psi_delta(lm, delta, law)) / (lambda_star + h - lm);
  if (std::abs(pred.psi_prime_at_star) < 1e-4) {
    pred.informative = false;
    pred.boundary_warning = true;
    pred.a2 = 0.0;
  } else if (pred.psi_prime_at_star > 0.0) {
    pred.informative = true;
    pred.a2 = predict_overlap_a2(lambda_star, law, delta);
  } else {
    pred.informative = false;
    pred.a2 = 0.0;
  }
  return pred;
}

namespace {

// integrand of the inverse threshold, with the integrable 1/sqrt(y)
// singularity at 0 removed by the substitution y = s^2
double threshold_integral(const Channel& channel, int order) {
  const QuadratureRule noise = gauss_hermite(channel.has_density() ? order : 1);
  const auto [lo, hi] = channel.y_domain();

  auto f = [&](double y) {
    const auto m = channel.density_weighted_moments(y, noise);
    if (m[0] <= 1e-300) return 0.0;
    const double num = m[2] - m[0];
    return num * num / m[0];
  };

  double total = 0.0;
  const int panels = 40, nodes = 20;
  const double smax = std::sqrt(hi);
  for (int p = 0; p < panels; ++p) {
    const double a = smax * p / panels, b = smax * (p + 1) / panels;
    const QuadratureRule gl = gauss_legendre(nodes, a, b);
    for (int i = 0; i < nodes; ++i) {
      const double s = gl.nodes[i];
      total += gl.weights[i] * 2.0 * s * f(s * s);
    }
  }
  if (lo < 0.0) {
    const QuadratureRule gl = gauss_legendre(64, lo, 0.0);
    for (int i = 0; i < gl.order; ++i) total += gl.weights[i] * f(gl.nodes[i]);
  }
  return total;
}

}  // namespace

double delta_u(const Channel& channel, int order) {
  const double integral = threshold_integral(channel, order);
  if (!(integral > 0.0)) throw std::runtime_error("delta_u: degenerate integral (weak recovery impossible)");
  return 1.0 / integral;
}

double delta_u_complex() {
  // int exp(-y) (y-1)^2 dy = Var(Exp(1)) = 1
  return 1.0;
}

namespace {

Preprocessing finalize_preproc(Preprocessing p, double grid_lo, double grid_hi) {
  const int npts = 10000;
  double tau = -1e300;
  double lip = 0.0;
  double prev = p.map(grid_lo);
  for (int i = 1; i <= npts; ++i) {
    const double y = grid_lo + (grid_hi - grid_lo) * i / npts;
    const double v = p.map(y);
    tau = std::max(tau, v);
    lip = std::max(lip, std::abs(v - prev) / ((grid_hi - grid_lo) / npts));
    prev = v;
  }
  tau = std::max(tau, p.map(grid_lo));
  p.tau = tau + kTauSlack * std::max(1.0, std::abs(tau));
  p.lipschitz_bound = lip;
  return p;
}

}  // namespace

Preprocessing optimal_T_star(const Channel& channel, int order) {
  const QuadratureRule noise = gauss_hermite(channel.noise_order(order));
  Preprocessing p;
  p.name = "T*";
  p.map = [channel, noise](double y) {
    const auto m = channel.density_weighted_moments(y, noise);
    if (m[2] <= 1e-300) return 1.0 - 1.0 / std::max(y, 1.0);  // large-y limit of 1 - m0/m2
    return 1.0 - m[0] / m[2];
  };
  const auto [lo, hi] = channel.y_domain();
  return finalize_preproc(std::move(p), lo, std::max(hi, 250.0));
}

Preprocessing optimal_T_bar(const Channel& channel, double delta, int order) {
  const double du = delta_u(channel, order);
  if (!(delta > du)) throw std::invalid_argument("optimal_T_bar: delta must exceed delta_u");
  Preprocessing tstar = optimal_T_star(channel, order);
  Preprocessing p;
  p.name = "Tbar";
  const double sdu = std::sqrt(du), sd = std::sqrt(delta);
  p.map = [ts = tstar.map, sdu, sd](double y) {
    const double t = ts(y);
    return sdu * t / (sd - (sd - sdu) * t);
  };
  const auto [lo, hi] = channel.y_domain();
  return finalize_preproc(std::move(p), lo, std::max(hi, 250.0));
}

Preprocessing optimal_T_star_complex() {
  // Exp(1) marginal: E{p(y|G)} = exp(-y), E{p(y|G)|G|^2} = y exp(-y)
  Preprocessing p;
  p.name = "T*_complex";
  p.map = [](double y) { return y > 1e-12 ? 1.0 - 1.0 / y : 1.0 - 1.0 / 1e-12; };
  return finalize_preproc(std::move(p), 0.0, 250.0);
}

Preprocessing optimal_T_bar_complex(double delta) {
  const double du = delta_u_complex();
  if (!(delta > du)) throw std::invalid_argument("optimal_T_bar_complex: delta must exceed delta_u = 1");
  Preprocessing p;
  p.name = "Tbar_complex";
  const double sdu = std::sqrt(du), sd = std::sqrt(delta);
  p.map = [sdu, sd](double y) {
    const double t = y > 1e-12 ? 1.0 - 1.0 / y : -1e12;
    const double v = sdu * t / (sd - (sd - sdu) * t);
    return std::max(v, -sdu / (sd - sdu));  // bounded limit as t -> -inf
  };
  return finalize_preproc(std::move(p), 0.0, 250.0);
}

namespace {

// v -> A^H (z . (A v)) + shift v ; the shift keeps the operator positive
// semidefinite so the magnitude-dominant eigenpair is the top one.
template <typename T>
class DnOperator final : public LinearOperator<T> {
 public:
  DnOperator(const LinearOperator<T>& a, std::vector<double> z, double shift)
      : a_(a), z_(std::move(z)), shift_(shift), buf_(a.rows()) {}

  std::size_t rows() const override { return a_.cols(); }
  std::size_t cols() const override { return a_.cols(); }

  void apply(std::span<const T> v, std::span<T> out) const override {
    a_.apply(v, std::span<T>(buf_));
    for (std::size_t i = 0; i < buf_.size(); ++i) buf_[i] *= z_[i];
    a_.apply_adjoint(std::span<const T>(buf_), out);
    if (shift_ != 0.0) {
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += shift_ * v[j];
    }
  }
  void apply_adjoint(std::span<const T> u, std::span<T> out) const override { apply(u, out); }

 private:
  const LinearOperator<T>& a_;
  std::vector<double> z_;
  double shift_;
  mutable std::vector<T> buf_;
};

double psd_shift(const std::vector<double>& z, double delta) {
  double zmin = 0.0;
  for (double v : z) zmin = std::min(zmin, v);
  if (zmin >= 0.0) return 0.0;
  // |lambda_min(D_n)| <= |z_min| sigma_max(A)^2, sigma_max(A) ~ 1 + sqrt(delta)
  const double smax2 = (1.0 + std::sqrt(delta)) * (1.0 + std::sqrt(delta));
  return -zmin * smax2 * 1.1;
}

}  // namespace

SpectralEstimate spectral_estimate(const Instance& instance, const Preprocessing& preproc, Rng& rng,
                                   const std::vector<double>* truth, int max_iter, double tol) {
  std::vector<double> z(instance.n);
  for (std::size_t i = 0; i < instance.n; ++i) z[i] = preproc.map(instance.y[i]);
  const double shift = psd_shift(z, instance.delta);
  DnOperator<double> dn(*instance.op, std::move(z), shift);

  auto res = power_method(dn, tol, max_iter, rng);

  SpectralEstimate est;
  est.eigenvalue = res.eigenvalue - shift;
  est.iterations = res.iterations;
  est.converged = res.converged;
  est.xs = std::move(res.eigenvector);
  if (truth != nullptr) {
    double ip = 0.0;
    for (std::size_t i = 0; i < est.xs.size(); ++i) ip += est.xs[i] * (*truth)[i];
    if (ip < 0.0) {
      for (auto& v : est.xs) v = -v;
    }
    est.sign_aligned = true;
  }
  return est;
}

ComplexSpectralEstimate spectral_estimate_complex(const ComplexOperator& op, const std::vector<double>& y,
                                                  const Preprocessing& preproc, Rng& rng, int max_iter, double tol) {
  std::vector<double> z(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) z[i] = preproc.map(y[i]);
  const double delta = static_cast<double>(op.rows()) / static_cast<double>(op.cols());
  const double shift = psd_shift(z, delta);
  DnOperator<std::complex<double>> dn(op, std::move(z), shift);

  auto res = power_method(dn, tol, max_iter, rng);

  ComplexSpectralEstimate est;
  est.eigenvalue = res.eigenvalue - shift;
  est.iterations = res.iterations;
  est.converged = res.converged;
  est.xs = std::move(res.eigenvector);
  return est;
}

}  // namespace glmamp

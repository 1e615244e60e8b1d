#include "glmamp/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace glmamp {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

double normal_pdf(double x, double mu, double var) {
  const double z = x - mu;
  return kInvSqrt2Pi / std::sqrt(var) * std::exp(-0.5 * z * z / var);
}

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Integrals of exp(-(g-m)^2/(2 s2)) exp(-(y-g^2)^2/(2 sw^2)) {1, g, g^2} dg,
// the unnormalized posterior of the signal under an additive-noise square
// channel. Smooth in g with up to three peaks: the reference at m and the
// likelihood ridges near +-sqrt(y) (width sw/(2 sqrt(y))), so composite
// Gauss-Legendre panels graded around those features converge fast. The
// largest exponent is factored out; s0/s1/s2 carry exp(-lmax) weights.
struct SignalIntegrals {
  double lmax = 0.0;
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
};

SignalIntegrals signal_integrals(double y, double m, double s2, double sw) {
  static const QuadratureRule gl = gauss_legendre(8, 0.0, 1.0);
  constexpr int kMaxKnots = 48;
  constexpr int kMaxNodes = 8 * kMaxKnots;

  const double sp = std::sqrt(s2);
  const double gmax = std::sqrt(std::max(0.0, y) + 9.0 * sw);
  // union of the two factors' supports: when they only overlap in their
  // tails the posterior peaks at a compromise point outside either core
  const double lo = std::min(m - 9.0 * sp, -gmax);
  const double hi = std::max(m + 9.0 * sp, gmax);
  SignalIntegrals out;
  if (!(lo < hi)) return out;

  const double inv_s2 = 1.0 / s2;
  const double inv_sw2 = 1.0 / (sw * sw);
  auto lw = [&](double g) {
    const double dp = g - m;
    const double dl = y - g * g;
    return -0.5 * (dp * dp * inv_s2 + dl * dl * inv_sw2);
  };

  double knots[kMaxKnots];
  int nk = 0;
  knots[nk++] = lo;
  knots[nk++] = hi;
  auto add = [&](double c, double s) {
    for (double o : {-6.0, -2.0, 0.0, 2.0, 6.0}) {
      const double g = c + o * s;
      if (g > lo && g < hi) knots[nk++] = g;
    }
  };
  add(m, sp);
  if (y > sw) {
    const double r = std::sqrt(y);
    const double b = 0.5 * sw / r;
    add(r, b);
    add(-r, b);
  } else {
    add(0.0, std::sqrt(sw));
  }
  // locate the global peak of the log-density (coarse scan + Newton) and
  // grade panels around it and its mirror image as well; the feature knots
  // above miss it when the peak is a tail-vs-tail compromise
  {
    const int kScan = 64;
    double best = lo, best_l = lw(lo);
    for (int i = 1; i <= kScan; ++i) {
      const double g = lo + (hi - lo) * static_cast<double>(i) / kScan;
      const double l = lw(g);
      if (l > best_l) {
        best_l = l;
        best = g;
      }
    }
    double g = best;
    for (int it = 0; it < 20; ++it) {
      const double d1 = -(g - m) * inv_s2 + 2.0 * g * (y - g * g) * inv_sw2;
      const double d2 = -inv_s2 + (2.0 * y - 6.0 * g * g) * inv_sw2;
      if (d2 >= 0.0) break;
      const double step = d1 / d2;
      const double next = std::clamp(g - step, lo, hi);
      if (std::abs(next - g) < 1e-13 * (hi - lo)) {
        g = next;
        break;
      }
      g = next;
    }
    const double d2 = -inv_s2 + (2.0 * y - 6.0 * g * g) * inv_sw2;
    const double width = d2 < 0.0 ? 1.0 / std::sqrt(-d2) : sp;
    add(g, width);
    add(-g, width);
  }
  std::sort(knots, knots + nk);

  double gs[kMaxNodes], ls[kMaxNodes], ws[kMaxNodes];
  int n = 0;
  double lmax = -std::numeric_limits<double>::infinity();
  for (int p = 0; p + 1 < nk; ++p) {
    const double len = knots[p + 1] - knots[p];
    if (len <= 0.0) continue;
    for (int j = 0; j < gl.order; ++j) {
      const double g = knots[p] + len * gl.nodes[j];
      const double l = lw(g);
      gs[n] = g;
      ls[n] = l;
      ws[n] = len * gl.weights[j];
      lmax = std::max(lmax, l);
      ++n;
    }
  }
  if (n == 0) return out;
  out.lmax = lmax;
  for (int i = 0; i < n; ++i) {
    const double w = ws[i] * std::exp(ls[i] - lmax);
    out.s0 += w;
    out.s1 += w * gs[i];
    out.s2 += w * gs[i] * gs[i];
  }
  return out;
}

}  // namespace

Prior Prior::gaussian() {
  Prior p;
  p.kind = Kind::Gaussian;
  p.sampler = [](Rng& rng) { return rng.next_normal(); };
  return p;
}

Prior Prior::binary(double p_plus) {
  if (!(p_plus > 0.0 && p_plus < 1.0)) throw std::invalid_argument("Prior::binary: p must be in (0,1)");
  Prior p;
  p.kind = Kind::Binary;
  p.p_plus = p_plus;
  p.sampler = [p_plus](Rng& rng) { return rng.next_uniform() < p_plus ? 1.0 : -1.0; };
  p.atoms = {{p_plus, 1.0}, {1.0 - p_plus, -1.0}};
  return p;
}

Channel Channel::noiseless_pr() {
  Channel c;
  c.kind = Kind::NoiselessPr;
  return c;
}

Channel Channel::noisy_pr(double sigma_w) {
  if (!(sigma_w > 0.0)) throw std::invalid_argument("Channel::noisy_pr: sigma_w must be > 0");
  Channel c;
  c.kind = Kind::NoisyPr;
  c.sigma_w = sigma_w;
  return c;
}

Channel Channel::smoothed_pr(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("Channel::smoothed_pr: eps must be > 0");
  Channel c;
  c.kind = Kind::SmoothedPr;
  c.sigma_w = eps;
  return c;
}

double Channel::sample(double g, Rng& rng) const {
  switch (kind) {
    case Kind::NoiselessPr:
      return g * g;
    case Kind::NoisyPr:
    case Kind::SmoothedPr:
      return g * g + sigma_w * rng.next_normal();
    default:
      throw std::logic_error("Channel::sample: custom channel has no built-in sampler");
  }
}

double Channel::q(double g, double w) const {
  switch (kind) {
    case Kind::NoiselessPr:
      return g * g;
    case Kind::NoisyPr:
    case Kind::SmoothedPr:
      return g * g + sigma_w * w;
    default:
      throw std::logic_error("Channel::q: custom channel");
  }
}

std::pair<double, double> Channel::y_domain() const {
  // max |g| = 6 for the truncation; Gaussian tails beyond are < 1e-15
  const double gmax2 = 36.0;
  if (kind == Kind::NoiselessPr) return {0.0, gmax2};
  return {-8.0 * sigma_w, gmax2 + 8.0 * sigma_w};
}

double Channel::density(double y, double g) const {
  if (!has_density()) throw std::logic_error("Channel::density: exact noiseless channel has a point-mass law");
  const auto [lo, hi] = y_domain();
  if (y < lo || y > hi) return 0.0;
  return normal_pdf(y, g * g, sigma_w * sigma_w);
}

std::array<double, 3> Channel::density_weighted_moments(double y, const QuadratureRule&) const {
  // exact channel: the change of variables u = G^2 gives the closed form
  // rho_f(y) = [phi(sqrt y) f(sqrt y) + phi(-sqrt y) f(-sqrt y)] / (2 sqrt y)
  if (kind == Kind::NoiselessPr) {
    if (y <= 0.0) return {0.0, 0.0, 0.0};
    const double su = std::sqrt(y);
    const double rho0 = std_normal_pdf(su) / su;
    return {rho0, 0.0, rho0 * y};
  }
  const auto gi = signal_integrals(y, 0.0, 1.0, sigma_w);
  const double c = kInvSqrt2Pi * kInvSqrt2Pi / sigma_w * std::exp(gi.lmax);
  return {c * gi.s0, 0.0, c * gi.s2};  // m1 vanishes by symmetry in g
}

Channel::PosteriorMoments Channel::posterior_moments(double y, double m, double s2, const QuadratureRule&) const {
  PosteriorMoments out;
  if (kind == Kind::NoiselessPr) {
    if (y <= 0.0) {
      out.mass = normal_pdf(0.0, m, s2);
      out.mean = 0.0;
      out.var = 0.0;
      return out;
    }
    const double r = std::sqrt(y);
    const double t = std::tanh(r * m / s2);
    out.mass = (normal_pdf(r, m, s2) + normal_pdf(-r, m, s2)) / (2.0 * r);
    out.mean = r * t;
    out.var = y - out.mean * out.mean;
    return out;
  }
  const auto gi = signal_integrals(y, m, s2, sigma_w);
  if (gi.s0 > 0.0) {
    out.mass = kInvSqrt2Pi * kInvSqrt2Pi / (std::sqrt(s2) * sigma_w) * std::exp(gi.lmax) * gi.s0;
    out.mean = gi.s1 / gi.s0;
    out.var = std::max(0.0, gi.s2 / gi.s0 - out.mean * out.mean);
  } else {
    out.mass = 0.0;
    out.mean = m;  // degenerate: likelihood and reference do not overlap
    out.var = s2;
  }
  return out;
}

Instance sample_instance(const Prior& prior, const Channel& channel, std::size_t d, double delta, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_instance: d must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("sample_instance: delta must be > 0");
  const std::size_t n = static_cast<std::size_t>(std::llround(delta * static_cast<double>(d)));
  if (n < 1) throw std::invalid_argument("sample_instance: round(delta*d) must be >= 1");

  Instance inst;
  inst.d = d;
  inst.n = n;
  inst.delta = delta;

  inst.x.resize(d);
  double nrm2 = 0.0;
  for (auto& xi : inst.x) {
    xi = prior.sampler(rng);
    nrm2 += xi * xi;
  }
  const double scale = std::sqrt(static_cast<double>(d) / nrm2);
  for (auto& xi : inst.x) xi *= scale;

  std::vector<double> a(n * d);
  const double sd = 1.0 / std::sqrt(static_cast<double>(d));
  for (auto& e : a) e = sd * rng.next_normal();
  auto op = std::make_shared<DenseOperator<double>>(n, d, std::move(a));

  std::vector<double> g = op->apply(inst.x);
  inst.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) inst.y[i] = channel.sample(g[i], rng);
  inst.op = std::move(op);
  return inst;
}

std::vector<double> channel_density_grid(const Channel& channel, double g, const std::vector<double>& grid) {
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = channel.density(grid[i], g);
  return out;
}

ComplexInstance sample_complex_instance(std::size_t d, double delta, Rng& rng) {
  if (d < 1) throw std::invalid_argument("sample_complex_instance: d must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("sample_complex_instance: delta must be > 0");
  const std::size_t n = static_cast<std::size_t>(std::llround(delta * static_cast<double>(d)));
  if (n < 1) throw std::invalid_argument("sample_complex_instance: round(delta*d) must be >= 1");

  ComplexInstance inst;
  inst.d = d;
  inst.n = n;
  inst.delta = delta;

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  inst.x.resize(d);
  double nrm2 = 0.0;
  for (auto& xi : inst.x) {
    xi = std::complex<double>(rng.next_normal(), rng.next_normal()) * inv_sqrt2;
    nrm2 += std::norm(xi);
  }
  const double scale = std::sqrt(static_cast<double>(d) / nrm2);
  for (auto& xi : inst.x) xi *= scale;

  std::vector<std::complex<double>> a(n * d);
  const double sd = 1.0 / std::sqrt(2.0 * static_cast<double>(d));
  for (auto& e : a) e = std::complex<double>(rng.next_normal(), rng.next_normal()) * sd;
  auto op = std::make_shared<DenseOperator<std::complex<double>>>(n, d, std::move(a));

  auto g = op->apply(inst.x);
  inst.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) inst.y[i] = std::norm(g[i]);
  inst.op = std::move(op);
  return inst;
}

}  // namespace glmamp

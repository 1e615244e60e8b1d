#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "glmamp/cdp.hpp"
#include "glmamp/cgamp.hpp"
#include "glmamp/models.hpp"
#include "glmamp/spectral.hpp"

using namespace glmamp;

namespace {

// I_k(x) = (1/pi) int_0^pi cos(k t) exp(x cos t) dt by the trapezoid rule
double bessel_trapezoid(int k, double x) {
  const int n = 20000;
  const double h = std::numbers::pi / n;
  double acc = 0.5 * (std::exp(x) + std::cos(k * std::numbers::pi) * std::exp(-x));
  for (int i = 1; i < n; ++i) {
    const double t = i * h;
    acc += std::cos(k * t) * std::exp(x * std::cos(t));
  }
  return acc * h / std::numbers::pi;
}

std::vector<std::complex<double>> random_cvec(std::size_t n, Rng& rng) {
  std::vector<std::complex<double>> v(n);
  for (auto& e : v) e = {rng.next_normal(), rng.next_normal()};
  return v;
}

}  // namespace

TEST_CASE("Bessel ratio matches a quadrature oracle and its asymptotics") {
  for (double x : {1e-10, 1e-6, 0.01, 0.5, 1.0, 3.0, 10.0, 50.0, 200.0, 650.0}) {
    const double want = x < 1e-4 ? x / 2.0 : bessel_trapezoid(1, x) / bessel_trapezoid(0, x);
    CHECK(bessel_i1_i0(x) == doctest::Approx(want).epsilon(1e-6));
  }
  // both branches agree where the implementation switches to the series
  CHECK(std::abs(bessel_i1_i0(200.0 * (1.0 - 1e-12)) - bessel_i1_i0(200.0 * (1.0 + 1e-12))) < 1e-10);
  // monotone increasing towards 1
  CHECK(bessel_i1_i0(1e4) > 0.99994);
  CHECK(bessel_i1_i0(1e4) < 1.0);
}

TEST_CASE("phase-aligned overlap matches a dense phase-grid oracle and is invariant") {
  Rng rng(3);
  auto x = random_cvec(50, rng);
  auto xh = random_cvec(50, rng);
  double nx = 0.0, nh = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nx += std::norm(x[i]);
    nh += std::norm(xh[i]);
  }
  double best = 0.0;
  for (int k = 0; k < 3600; ++k) {
    const std::complex<double> rot = std::polar(1.0, 2.0 * std::numbers::pi * k / 3600.0);
    std::complex<double> ip{};
    for (std::size_t i = 0; i < x.size(); ++i) ip += std::conj(xh[i]) * rot * x[i];
    best = std::max(best, ip.real() * ip.real() / (nx * nh));
  }
  const double got = phase_aligned_overlap(xh, x);
  CHECK(got == doctest::Approx(best).epsilon(1e-5));
  // global phase invariance is exact
  auto rotated = x;
  const std::complex<double> rot = std::polar(1.0, 0.7213);
  for (auto& e : rotated) e *= rot;
  CHECK(phase_aligned_overlap(xh, rotated) == doctest::Approx(got).epsilon(1e-12));
  CHECK(phase_aligned_overlap(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(phase_aligned_overlap(xh, std::vector<std::complex<double>>(3)));
}

TEST_CASE("posterior mean lies on the expected ray and shrinks correctly") {
  const ComplexDenoiser den = complex_h_star(0.4, 0.2);
  CHECK(den.rho == doctest::Approx(0.4 / (0.16 + 0.2)).epsilon(1e-12));
  CHECK(den.s2 == doctest::Approx(1.0 - den.rho * 0.4).epsilon(1e-12));
  const std::complex<double> u{0.3, -0.5};
  const double y = 1.4;
  const auto m = den.post_mean(u, y);
  // the posterior mean points along u and has modulus sqrt(y) R(kappa)
  const double kappa = 2.0 * std::sqrt(y) * den.rho * std::abs(u) / den.s2;
  CHECK(std::abs(m) == doctest::Approx(std::sqrt(y) * bessel_i1_i0(kappa)).epsilon(1e-10));
  const auto dir = m / std::abs(m) - u / std::abs(u);
  CHECK(std::abs(dir) < 1e-12);
  CHECK(den.post_var(u, y) == doctest::Approx(y * (1.0 - std::pow(bessel_i1_i0(kappa), 2))).epsilon(1e-10));
  // h = (post_mean - rho u)/s2
  const auto hv = den.h(u, y);
  CHECK(std::abs(hv - (m - den.rho * u) / den.s2) < 1e-12);
}

TEST_CASE("single-parameter recursion grows above threshold and has the norm inverse") {
  const double delta = 3.0;
  double mu = 0.2;
  const double mu1 = complex_se_step(mu, delta);
  CHECK(mu1 > mu);  // informative regime: the parameter increases
  const auto trace = complex_se_trace(0.2, delta, 8);
  REQUIRE(trace.size() == 9);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1]);

  for (double v : {0.1, 1.0, 7.3}) {
    const double m = mu_from_norm(v);
    CHECK(m * m + m == doctest::Approx(v).epsilon(1e-12));
    CHECK(m >= 0.0);
  }
}

TEST_CASE("coded-diffraction operator matches an explicit DFT matrix on a 4x4 image") {
  Rng rng(5);
  const std::size_t d1 = 4, d2 = 4, d = d1 * d2;
  const int L = 2;
  CdpOperator op(d1, d2, L, static_cast<double>(L), rng);  // no discarded rows
  REQUIRE(op.rows() == L * d);

  auto x = random_cvec(d, rng);
  const auto got = op.apply(x);

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  for (int l = 0; l < L; ++l) {
    const auto& mask = op.masks()[static_cast<std::size_t>(l)];
    for (std::size_t k1 = 0; k1 < d1; ++k1) {
      for (std::size_t k2 = 0; k2 < d2; ++k2) {
        std::complex<double> acc{};
        for (std::size_t t1 = 0; t1 < d1; ++t1) {
          for (std::size_t t2 = 0; t2 < d2; ++t2) {
            const double ang = 2.0 * std::numbers::pi * (static_cast<double>(k1 * t1) / d1 +
                                                         static_cast<double>(k2 * t2) / d2);
            acc += mask[t1 * d2 + t2] * x[t1 * d2 + t2] * std::polar(1.0, ang);
          }
        }
        const std::size_t row = static_cast<std::size_t>(l) * d + k1 * d2 + k2;
        CHECK(std::abs(got[row] - acc * inv_sqrt_d) < 1e-12);
      }
    }
  }
}

TEST_CASE("coded-diffraction operator is an L-fold isometry and satisfies the adjoint identity") {
  Rng rng(8);
  const std::size_t d1 = 8, d2 = 4, d = d1 * d2;
  const int L = 3;
  CdpOperator op(d1, d2, L, static_cast<double>(L), rng);
  auto x = random_cvec(d, rng);
  const auto ax = op.apply(x);
  double nx = 0.0, nax = 0.0;
  for (const auto& e : x) nx += std::norm(e);
  for (const auto& e : ax) nax += std::norm(e);
  CHECK(nax == doctest::Approx(L * nx).epsilon(1e-12));

  auto u = random_cvec(op.rows(), rng);
  const auto atu = op.apply_adjoint(u);
  std::complex<double> lhs{}, rhs{};
  for (std::size_t i = 0; i < op.rows(); ++i) lhs += std::conj(u[i]) * ax[i];
  for (std::size_t j = 0; j < d; ++j) rhs += std::conj(atu[j]) * x[j];
  CHECK(std::abs(lhs - rhs) < 1e-10);

  // masks are quaternary phases
  for (const auto& mask : op.masks()) {
    for (const auto& m : mask) {
      CHECK(std::abs(std::abs(m) - 1.0) < 1e-15);
      CHECK((std::abs(m.real()) < 1e-15 || std::abs(m.imag()) < 1e-15));
    }
  }
}

TEST_CASE("fractional sampling ratios discard the right number of rows") {
  Rng rng(13);
  const std::size_t d1 = 8, d2 = 8, d = d1 * d2;
  const double delta = 2.4;
  const int L = 3;
  CdpOperator op(d1, d2, L, delta, rng);
  const std::size_t want_zero = static_cast<std::size_t>(std::llround((L - delta) * static_cast<double>(d)));
  CHECK(op.zeroed_rows().size() == want_zero);
  CHECK(op.rows() == L * d - want_zero);
  // zeroed and kept rows partition the full index range
  CHECK(op.zeroed_rows().size() + op.kept_rows().size() == L * d);
}

TEST_CASE("complex iteration recovers a dense-Gaussian instance above threshold") {
  Rng rng(17);
  const double delta = 3.0;
  ComplexInstance inst = sample_complex_instance(400, delta, rng);
  const Preprocessing tb = optimal_T_bar_complex(delta);
  const ZsLaw law = make_zs_law_complex(tb);
  const SpectralPrediction pred = solve_lambda_star(law, delta);
  REQUIRE(pred.informative);
  ComplexSpectralEstimate est = spectral_estimate_complex(*inst.op, inst.y, tb, rng);
  REQUIRE(est.converged);
  const double spectral_ov = phase_aligned_overlap(est.xs, inst.x);
  CHECK(std::abs(spectral_ov - pred.a2) < 0.15);

  ComplexGampConfig cfg;
  cfg.max_iter = 50;
  cfg.stop_tol = 1e-10;
  ComplexGampTrace trace = complex_gamp_run(inst, cfg, est.xs, pred.a2, pred.lambda_star, tb);
  CHECK(trace.overlaps.back() > spectral_ov);
  CHECK(trace.overlaps.back() > 0.99);

  // the online parameter estimate follows the quadrature schedule
  ComplexGampConfig online = cfg;
  online.online_mu = true;
  ComplexGampTrace otrace = complex_gamp_run(inst, online, est.xs, pred.a2, pred.lambda_star, tb);
  CHECK(otrace.overlaps.back() > 0.99);
  const std::size_t k = std::min(trace.mus.size(), otrace.mus.size());
  for (std::size_t t = 0; t < std::min<std::size_t>(k, 4); ++t) {
    CHECK(std::abs(trace.mus[t] - otrace.mus[t]) < 0.2 * std::max(1.0, trace.mus[t]));
  }
}

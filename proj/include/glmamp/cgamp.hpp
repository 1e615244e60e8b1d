#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "glmamp/models.hpp"
#include "glmamp/quadrature.hpp"

namespace glmamp {

// I1(x)/I0(x) for x >= 0 (modified Bessel functions of the first kind)
double bessel_i1_i0(double x);

// max_theta |<xhat, e^{i theta} x>|^2 / (||x||^2 ||xhat||^2)
double phase_aligned_overlap(const std::vector<std::complex<double>>& xhat,
                             const std::vector<std::complex<double>>& x);

// Posterior of complex G ~ CN(0,1) given U = u and Y = |G|^2 = y, where
// (G, U) are jointly circular Gaussian with E{U conj(G)} = mu_U and
// E{|U|^2} = mu_U^2 + sig2_U. The posterior of G given U alone is
// CN(rho u, s2); conditioning on |G|^2 = y restricts it to a circle, giving
// a von Mises angle law whose mean resultant is a Bessel ratio.
struct ComplexDenoiser {
  double rho = 0.0;
  double s2 = 0.0;
  std::function<std::complex<double>(std::complex<double>, double)> post_mean;
  std::function<double(std::complex<double>, double)> post_var;
  std::function<std::complex<double>(std::complex<double>, double)> h;  // (post_mean - rho u)/s2
};
ComplexDenoiser complex_h_star(double mu_U, double sig2_U);

// Single-parameter recursion: mu_U = mu/sqrt(delta), sig2_U = mu/delta,
// mu_{t+1} = sqrt(delta) E{|h*(U;Y)|^2} with Y = |G|^2, G ~ CN(0,1).
double complex_se_step(double mu, double delta, int order = kDefaultQuadOrder);
std::vector<double> complex_se_trace(double mu0, double delta, int T, int order = kDefaultQuadOrder);

// positive root of m^2 + m = v (iterate-norm parameter estimate)
double mu_from_norm(double v);

struct ComplexGampConfig {
  int max_iter = 200;
  double stop_tol = 1e-9;
  double damping = 1.0;
  bool online_mu = false;   // re-estimate mu from the iterates each step
  double mu0 = -1.0;        // < 0: derive from a2 as a^2/(1-a^2)
  double x0_scale = -1.0;   // < 0: derive from a2 as sqrt(d) a/(1-a^2)
  int order = kDefaultQuadOrder;
};

struct ComplexGampTrace {
  std::vector<double> overlaps;  // phase-aligned squared correlation, per iteration
  std::vector<double> diffs;     // ||x^{t+1}-x^t||^2/d
  std::vector<double> mus;       // parameter schedule actually used
  std::vector<std::complex<double>> final_x;
  bool converged = false;
};

// x^0 = sqrt(d) a/(1-a^2) xhat; u^0 = (1 - T(y)/lambda*) (A x^0)/sqrt(delta);
// x^{t+1} = A^H h*(u^t;y) - c_t x^t, u^{t+1} = (A x^{t+1} - h*(u^t;y))/sqrt(delta),
// c_t = sqrt(delta)/s2 (mean_i Var{G|u_i,y_i}/s2 - 1).
ComplexGampTrace complex_gamp_run(const ComplexInstance& instance, const ComplexGampConfig& config,
                                  const std::vector<std::complex<double>>& xhat_spectral, double a2,
                                  double lambda_star, const Preprocessing& preproc);

}  // namespace glmamp

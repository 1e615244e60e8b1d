#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "glmamp/models.hpp"
#include "glmamp/numerics.hpp"

namespace glmamp {

// Scalar field of the sensing ensemble. For the real Gaussian case G^2 is a
// chi-square(1); for the complex Gaussian case |G|^2 is Exp(1).
enum class Field { Real, Complex };

// Weighted samples of (Z_s, G^2) used for every asymptotic expectation:
// E{F(Z_s, G^2)} ~= sum_k w_k F(z_k, gsq_k).
struct ZsLaw {
  struct Sample {
    double w;
    double z;
    double gsq;
  };
  std::vector<Sample> samples;
  double tau = 0.0;  // support supremum of Z_s seen by the law (plus slack)

  template <typename F>
  double expect(F&& f) const {
    double acc = 0.0;
    for (const auto& s : samples) acc += s.w * f(s.z, s.gsq);
    return acc;
  }
};

// Builds the law for a (channel, preprocessing) pair; `order` is the 1-D
// quadrature order per dimension.
ZsLaw make_zs_law(const Channel& channel, const Preprocessing& preproc, int order = kDefaultQuadOrder);
ZsLaw make_zs_law_complex(const Preprocessing& preproc, int order = kDefaultQuadOrder);

// phi(lambda) = lambda E{Z G^2/(lambda - Z)}
double phi(double lambda, const ZsLaw& law);
// psi_delta(lambda) = lambda/delta + lambda E{Z/(lambda - Z)}
double psi_delta(double lambda, double delta, const ZsLaw& law);
// analytic derivatives
double phi_prime(double lambda, const ZsLaw& law);
double psi_delta_prime(double lambda, double delta, const ZsLaw& law);

struct SpectralPrediction {
  double lambda_star = 0.0;
  double lambda_bar = 0.0;
  double psi_prime_at_star = 0.0;  // central finite difference
  double a2 = 0.0;
  bool informative = false;
  bool boundary_warning = false;  // |psi'| within 1e-4 of the transition
};

// Solves zeta_delta(lambda) = phi(lambda) above tau and evaluates the
// limiting squared overlap.
SpectralPrediction solve_lambda_star(const ZsLaw& law, double delta);

// explicit a^2 ratio at a given lambda (informative branch)
double predict_overlap_a2(double lambda_star, const ZsLaw& law, double delta);

// weak-recovery threshold: delta_u = (int (E_G{p(y|G)(G^2-1)})^2 / E_G{p(y|G)} dy)^-1
double delta_u(const Channel& channel, int order = kDefaultQuadOrder);
double delta_u_complex();

// threshold-optimal preprocessing functions
Preprocessing optimal_T_star(const Channel& channel, int order = kDefaultQuadOrder);
Preprocessing optimal_T_bar(const Channel& channel, double delta, int order = kDefaultQuadOrder);
Preprocessing optimal_T_star_complex();
Preprocessing optimal_T_bar_complex(double delta);

struct SpectralEstimate {
  std::vector<double> xs;  // unit norm
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = true;
  bool sign_aligned = false;
};

struct ComplexSpectralEstimate {
  std::vector<std::complex<double>> xs;
  double eigenvalue = 0.0;
  int iterations = 0;
  bool converged = true;
};

// Power iteration on v -> A^T (T_s(y) . (A v)) without materializing D_n.
// When `truth` is non-null the sign is chosen so <xs, truth> >= 0.
SpectralEstimate spectral_estimate(const Instance& instance, const Preprocessing& preproc, Rng& rng,
                                   const std::vector<double>* truth = nullptr, int max_iter = 100000,
                                   double tol = 1e-7);

ComplexSpectralEstimate spectral_estimate_complex(const ComplexOperator& op, const std::vector<double>& y,
                                                  const Preprocessing& preproc, Rng& rng, int max_iter = 100000,
                                                  double tol = 1e-7);

}  // namespace glmamp

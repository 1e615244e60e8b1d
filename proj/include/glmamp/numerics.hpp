#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "glmamp/linop.hpp"
#include "glmamp/rng.hpp"

namespace glmamp {

// Bisection root of a continuous monotone f on [lo, hi]. Throws if the
// endpoints do not bracket a sign change.
double find_root_monotone(const std::function<double(double)>& f, double lo, double hi, double tol);

// Golden-section minimizer of a convex f on [lo, hi].
double minimize_convex(const std::function<double(double)>& f, double lo, double hi, double tol);

template <typename T>
struct PowerResult {
  double eigenvalue = 0.0;
  std::vector<T> eigenvector;
  int iterations = 0;
  bool converged = false;
};

// Dominant eigenpair of a square Hermitian operator. Stops once the modulus
// of the inner product between the iterates at T and T-10 exceeds 1 - 1e-7,
// or after max_iter iterations.
PowerResult<double> power_method(const RealOperator& op, double tol, int max_iter, Rng& rng);
PowerResult<std::complex<double>> power_method(const ComplexOperator& op, double tol, int max_iter, Rng& rng);

}  // namespace glmamp

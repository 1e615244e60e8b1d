#include "glmamp/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace glmamp {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Golub-Welsch: nodes/weights of an n-point rule from the symmetric
// tridiagonal Jacobi matrix of the orthogonal-polynomial recurrence. The
// weights are mu0 times the squared first eigenvector components. Stable at
// any order, unlike Newton iteration on the recurrence.
void golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag, double mu0,
                  std::vector<double>& x, std::vector<double>& w) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    j(i, i) = diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) j(i, i + 1) = j(i + 1, i) = offdiag[static_cast<std::size_t>(i)];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  if (es.info() != Eigen::Success) throw std::runtime_error("golub_welsch: eigensolver failed");
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    w[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
}

}  // namespace

QuadratureRule gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  QuadratureRule rule;
  rule.order = order;
  if (order == 1) {
    rule.nodes = {0.0};
    rule.weights = {1.0};
    return rule;
  }
  // standard normal weight: Jacobi matrix of the probabilists' Hermite
  // polynomials has zero diagonal and off-diagonal sqrt(k)
  std::vector<double> diag(order, 0.0), off(order - 1);
  for (int k = 1; k < order; ++k) off[k - 1] = std::sqrt(static_cast<double>(k));
  golub_welsch(diag, off, 1.0, rule.nodes, rule.weights);
  return rule;
}

QuadratureRule gauss_laguerre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_laguerre: order must be >= 1");
  QuadratureRule rule;
  rule.order = order;
  if (order == 1) {
    rule.nodes = {1.0};
    rule.weights = {1.0};
    return rule;
  }
  // exp(-x) weight on [0, inf): Laguerre recurrence, diagonal 2k+1 and
  // off-diagonal k+1
  std::vector<double> diag(order), off(order - 1);
  for (int k = 0; k < order; ++k) diag[k] = 2.0 * k + 1.0;
  for (int k = 0; k + 1 < order; ++k) off[k] = static_cast<double>(k + 1);
  golub_welsch(diag, off, 1.0, rule.nodes, rule.weights);
  return rule;
}

QuadratureRule gauss_legendre(int order, double a, double b) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre: need a < b");
  QuadratureRule rule;
  rule.order = order;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int m = (order + 1) / 2;
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 200; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = xm - xl * z;
    rule.nodes[order - 1 - i] = xm + xl * z;
    rule.weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    rule.weights[order - 1 - i] = rule.weights[i];
  }
  return rule;
}

double expect_g(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (int i = 0; i < rule.order; ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) {
      throw std::runtime_error("expect_g: non-finite integrand at node " + std::to_string(rule.nodes[i]));
    }
    acc += rule.weights[i] * v;
  }
  return acc;
}

}  // namespace glmamp

#pragma once

#include <functional>
#include <vector>

namespace glmamp {

// Nodes/weights normalized for the target measure: gauss_hermite integrates
// against N(0,1), gauss_laguerre against Exp(1), gauss_legendre against
// Lebesgue measure on [a,b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;
};

inline constexpr int kDefaultQuadOrder = 61;

// E{f(W)}, W ~ N(0,1)
QuadratureRule gauss_hermite(int order);

// E{f(E)}, E ~ Exp(1)
QuadratureRule gauss_laguerre(int order);

// integral of f over [a,b]
QuadratureRule gauss_legendre(int order, double a, double b);

// E{f(G)}, G ~ N(0,1). Throws if f is non-finite at a node.
double expect_g(const std::function<double(double)>& f, const QuadratureRule& rule);

}  // namespace glmamp

#pragma once

#include <vector>

namespace plsec {

enum class QuadKind { Hermite, Laguerre, Legendre };

// Gaussian quadrature rule: nodes sorted ascending, weights strictly positive.
// Hermite integrates against exp(-x^2) on R, Laguerre against exp(-x) on
// [0, inf), Legendre against 1 on [-1, 1].
struct QuadratureRule {
  QuadKind kind;
  int order;
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Builds (or fetches from a thread-safe cache) the rule for 1 <= order <= 256.
// Throws std::invalid_argument for an out-of-range order.
QuadratureRule make_rule(QuadKind kind, int order);

// Cached-reference variant for hot paths; same contract as make_rule.
const QuadratureRule& quad_rule(QuadKind kind, int order);

}  // namespace plsec
